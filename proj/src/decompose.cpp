#include "lbirch/decompose.hpp"

#include <stdexcept>

namespace lbirch {

namespace {

// Bottom-up pivoting. Row i picks the leftmost column of minimal valuation
// among columns not yet used; that choice makes every column operation lie
// in the Iwahori subgroup. Row operations only add lower rows to upper ones.
struct Elimination {
  GMatrix L;  // upper unipotent with L g S = varpi^e omega * (units)
  std::vector<std::int64_t> e;
  std::vector<int> sigma;
};

Elimination eliminate(const GMatrix& g) {
  const int n = g.n();
  const std::int64_t p = g.prime();
  GMatrix M = g;
  Elimination out{GMatrix::identity(n, p), std::vector<std::int64_t>(static_cast<std::size_t>(n)),
                  std::vector<int>(static_cast<std::size_t>(n))};
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int i = n - 1; i >= 0; --i) {
    int jstar = -1;
    std::int64_t best = kInfiniteValuation;
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)] || M(i, c) == 0) continue;
      std::int64_t v = valuation(M(i, c), p);
      if (v < best) {
        best = v;
        jstar = c;
      }
    }
    if (jstar < 0) throw std::domain_error("decompose: singular matrix");
    const Rational pivot = M(i, jstar);
    for (int c = 0; c < n; ++c) {
      if (c == jstar || used[static_cast<std::size_t>(c)] || M(i, c) == 0) continue;
      const Rational x = M(i, c) / pivot;
      for (int r = 0; r <= i; ++r)
        if (M(r, jstar) != 0) M(r, c) -= x * M(r, jstar);
    }
    for (int k = 0; k < i; ++k) {
      if (M(k, jstar) == 0) continue;
      const Rational y = M(k, jstar) / pivot;
      M(k, jstar) = 0;
      for (int c = i; c < n; ++c)
        if (out.L(i, c) != 0) out.L(k, c) -= y * out.L(i, c);
    }
    used[static_cast<std::size_t>(jstar)] = true;
    out.sigma[static_cast<std::size_t>(i)] = jstar;
    out.e[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace

std::int64_t cell_exponent(const std::vector<std::int64_t>& e, const WeylElement& w, int i, int j) {
  return e[static_cast<std::size_t>(i)] - e[static_cast<std::size_t>(j)] + (w[i] > w[j] ? 1 : 0);
}

GMatrix canonicalize_unipotent(const GMatrix& u, const std::vector<std::int64_t>& e, const WeylElement& w) {
  GMatrix r = u;
  const int n = u.n();
  const std::int64_t p = u.prime();
  for (int j = 1; j < n; ++j) {
    for (int i = j - 1; i >= 0; --i) {
      const Rational target = reduce_mod_power(r(i, j), p, cell_exponent(e, w, i, j));
      const Rational x = target - r(i, j);
      if (x == 0) continue;
      // right multiplication by 1 + x E_ij: column j += x * column i
      for (int k = 0; k <= i; ++k)
        if (r(k, i) != 0) r(k, j) += x * r(k, i);
    }
  }
  return r;
}

IwasawaData decompose(const GMatrix& g) {
  Elimination el = eliminate(g);
  WeylElement w(el.sigma);
  GMatrix u = canonicalize_unipotent(el.L.inverse(), el.e, w);
  GMatrix pe_w = varpi_power(el.e, g.prime()) * w.matrix(g.prime());
  GMatrix s = pe_w.inverse() * u.inverse() * g;
  return {std::move(u), std::move(el.e), std::move(w), std::move(s)};
}

CellData decompose_cell(const GMatrix& g) {
  Elimination el = eliminate(g);
  Rational sum = 0;
  // The superdiagonal of an upper unipotent inverse is the negated superdiagonal.
  for (int i = 0; i + 1 < g.n(); ++i) sum -= el.L(i, i + 1);
  return {std::move(el.e), WeylElement(std::move(el.sigma)), std::move(sum)};
}

namespace {

GMatrix bk_triangular(const GMatrix& g) {
  const int n = g.n();
  const std::int64_t p = g.prime();
  GMatrix M = g;
  for (int i = n - 1; i >= 0; --i) {
    int jstar = -1;
    std::int64_t best = kInfiniteValuation;
    for (int c = 0; c <= i; ++c) {
      if (M(i, c) == 0) continue;
      std::int64_t v = valuation(M(i, c), p);
      if (v < best) {
        best = v;
        jstar = c;
      }
    }
    if (jstar < 0) throw std::domain_error("iwasawa_bk: singular matrix");
    if (jstar != i)
      for (int r = 0; r < n; ++r) std::swap(M(r, jstar), M(r, i));
    const Rational unit = M(i, i) / rpow(p, best);
    for (int r = 0; r <= i; ++r) M(r, i) /= unit;
    for (int c = 0; c < i; ++c) {
      if (M(i, c) == 0) continue;
      const Rational x = M(i, c) / M(i, i);
      for (int r = 0; r <= i; ++r)
        if (M(r, i) != 0) M(r, c) -= x * M(r, i);
    }
  }
  for (int j = 1; j < n; ++j) {
    for (int i = j - 1; i >= 0; --i) {
      const std::int64_t ei = valuation(M(i, i), p);
      const Rational r = reduce_mod_power(M(i, j), p, ei);
      if (r == M(i, j)) continue;
      const Rational q = (M(i, j) - r) / M(i, i);
      for (int k = 0; k <= i; ++k)
        if (M(k, i) != 0) M(k, j) -= q * M(k, i);
    }
  }
  return M;
}

}  // namespace

BKData iwasawa_bk(const GMatrix& g) {
  GMatrix b = bk_triangular(g);
  GMatrix k = b.inverse() * g;
  return {std::move(b), std::move(k)};
}

GMatrix coset_canonical(const GMatrix& g) { return bk_triangular(g); }

}  // namespace lbirch
