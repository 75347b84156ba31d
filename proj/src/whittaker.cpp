#include "lbirch/whittaker.hpp"

#include <random>
#include <sstream>

#include "lbirch/characters.hpp"

namespace lbirch {

std::string WhittakerKey::to_string() const {
  std::ostringstream os;
  os << "e=(";
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << ") w=" << omega.to_string();
  return os.str();
}

nlohmann::json WhittakerKey::to_json() const {
  std::vector<int> s;
  for (int x : omega.sigma()) s.push_back(x + 1);
  return {{"e", e}, {"sigma", s}};
}

bool supported(const std::vector<std::int64_t>& e, const WeylElement& w) {
  for (int i = 0; i + 1 < w.n(); ++i)
    if (cell_exponent(e, w, i, i + 1) < 0) return false;
  return true;
}

FormalPhase formal_eval_phase(const GMatrix& g, int sign) {
  CellData c = decompose_cell(g);
  FormalPhase out;
  out.key = WhittakerKey{std::move(c.e), std::move(c.omega)};
  if (!supported(out.key)) {
    out.zero = true;
    return out;
  }
  Phase ph = psi_phase(c.super_sum, g.prime());
  out.phase = sign >= 0 ? ph : -ph;
  return out;
}

FormalValue formal_eval(const GMatrix& g, int sign) {
  FormalPhase f = formal_eval_phase(g, sign);
  return {f.zero ? CyclotomicNumber(Rational(0)) : f.phase.value(), std::move(f.key)};
}

bool consistency_probe(const std::vector<std::int64_t>& e, const WeylElement& w, int trials, std::int64_t p,
                       std::uint64_t seed) {
  const int n = w.n();
  std::mt19937_64 rng(seed);
  const std::int64_t span = ipow(p, 4);
  std::uniform_int_distribution<std::int64_t> d(0, span - 1);
  const GMatrix base = varpi_power(e, p) * w.matrix(p);
  for (int t = 0; t < trials; ++t) {
    GMatrix s(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::int64_t x = d(rng);
        if (i == j) {
          while (x % p == 0) x = d(rng);
        } else if (i > j) {
          x *= p;
        }
        s(i, j) = x;
      }
    CellData c = decompose_cell(base * s);
    if (!psi_phase(c.super_sum, p).is_one()) return false;
  }
  return true;
}

SymbolicScalar complete_homogeneous(int n, std::int64_t p, int k) {
  SymbolicScalar out(n, p);
  if (k < 0) return out;
  // enumerate exponent vectors summing to k
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      a[static_cast<std::size_t>(i)] = left;
      out += SymbolicScalar::monomial(n, p, a);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, left - v);
    }
  };
  if (n == 0) return k == 0 ? SymbolicScalar(0, p, CyclotomicNumber(1)) : out;
  rec(rec, 0, k);
  return out;
}

namespace {

SymbolicScalar sym_det(std::vector<std::vector<SymbolicScalar>> m, int nvars, std::int64_t p) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return SymbolicScalar(nvars, p, CyclotomicNumber(1));
  // Laplace expansion along the first row; sizes here are tiny.
  SymbolicScalar out(nvars, p);
  for (int j = 0; j < n; ++j) {
    if (m[0][static_cast<std::size_t>(j)].is_zero()) continue;
    std::vector<std::vector<SymbolicScalar>> minor;
    for (int i = 1; i < n; ++i) {
      std::vector<SymbolicScalar> row;
      for (int c = 0; c < n; ++c)
        if (c != j) row.push_back(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
      minor.push_back(std::move(row));
    }
    SymbolicScalar term = m[0][static_cast<std::size_t>(j)] * sym_det(std::move(minor), nvars, p);
    if (j % 2) out -= term;
    else out += term;
  }
  return out;
}

}  // namespace

bool dominant(const std::vector<std::int64_t>& e) {
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    if (e[i] < e[i + 1]) return false;
  return true;
}

SymbolicScalar schur(int n, std::int64_t p, const std::vector<std::int64_t>& e) {
  if (!dominant(e)) throw std::invalid_argument("schur: exponent must be nonincreasing");
  if (n == 0) return SymbolicScalar(0, p, CyclotomicNumber(1));
  const std::int64_t shift = e.back();
  // Jacobi-Trudi: s_lambda = det(h_{lambda_i - i + j})
  std::vector<std::vector<SymbolicScalar>> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[static_cast<std::size_t>(i)].push_back(
          complete_homogeneous(n, p, static_cast<int>(e[static_cast<std::size_t>(i)] - shift) - i + j));
  SymbolicScalar s = sym_det(std::move(m), n, p);
  std::vector<int> all(static_cast<std::size_t>(n), static_cast<int>(shift));
  return s * SymbolicScalar::monomial(n, p, all);
}

SymbolicScalar shintani_value(int n, std::int64_t p, const std::vector<std::int64_t>& e) {
  if (!dominant(e)) return SymbolicScalar(n, p);
  std::int64_t k = 0;
  for (int i = 1; i <= n; ++i) k -= e[static_cast<std::size_t>(i - 1)] * (n + 1 - 2 * i);
  return schur(n, p, e) * SymbolicScalar::qhalf_pow(n, p, k);
}

SymbolicScalar spherical_eval(const GMatrix& g, int sign) {
  CellData c = decompose_cell(g);
  const int n = g.n();
  if (!dominant(c.e)) return SymbolicScalar(n, g.prime());
  Phase ph = psi_phase(c.super_sum, g.prime());
  if (sign < 0) ph = -ph;
  return shintani_value(n, g.prime(), c.e) * ph.value();
}

}  // namespace lbirch
