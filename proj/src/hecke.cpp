#include "lbirch/hecke.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "lbirch/characters.hpp"
#include "lbirch/decompose.hpp"
#include "lbirch/whittaker.hpp"

namespace lbirch {

namespace {

// Topological generators of Z_p^x: -1 together with a primitive root mod p^2
// (5 for p = 2).
std::vector<std::int64_t> unit_topological_gens(std::int64_t p) {
  if (p == 2) return {-1, 5};
  const std::int64_t p2 = p * p;
  for (std::int64_t g = 2; g < p2; ++g) {
    if (g % p == 0) continue;
    std::int64_t x = 1, ord = 0;
    do {
      x = x * g % p2;
      ++ord;
    } while (x != 1);
    if (ord == p * (p - 1)) return {-1, g};
  }
  throw std::logic_error("no primitive root");
}

std::vector<GMatrix> group_generators(int n, std::int64_t p, HeckeKind kind) {
  std::vector<GMatrix> gens;
  for (std::int64_t u : unit_topological_gens(p))
    for (int i = 0; i < n; ++i) {
      GMatrix d = GMatrix::identity(n, p);
      d(i, i) = u;
      gens.push_back(d);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || (kind == HeckeKind::Parabolic && i > j)) continue;
      GMatrix e = GMatrix::identity(n, p);
      e(i, j) = 1;
      gens.push_back(e);
    }
  return gens;
}

void require_invariant(HeckeQ& h, const char* what) {
  if (!verify_left_invariant(h, 3, 0x5eed)) throw std::logic_error(std::string(what) + ": not left invariant");
  h.set_left_invariant(true);
}

HeckeQ zero_element(int n, std::int64_t p, HeckeKind kind) {
  HeckeQ z(n, p, kind);
  z.set_left_invariant(true);
  return z;
}

SymbolicScalar elementary(int n, std::int64_t p, int k) {
  SymbolicScalar s(n, p);
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.end() - k, pick.end(), 1);
  do {
    s += SymbolicScalar::monomial(n, p, pick);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return s;
}

SymbolicScalar sym_const(int n, std::int64_t p, const Rational& c) { return SymbolicScalar(n, p, CyclotomicNumber(c)); }

HeckeSym to_sym(const HeckeQ& h, int nvars) {
  return h.map_coeffs<SymbolicScalar>([&](const Rational& a) { return sym_const(nvars, h.prime(), a); });
}

}  // namespace

CosetRep CosetRep::canonicalize(const GMatrix& b) {
  const int n = b.n();
  const std::int64_t p = b.prime();
  GMatrix M = b;
  for (int i = 0; i < n; ++i) {
    if (M(i, i) == 0) throw std::invalid_argument("CosetRep: singular matrix");
    for (int j = 0; j < i; ++j)
      if (M(i, j) != 0) throw std::invalid_argument("CosetRep: matrix is not upper triangular");
  }
  for (int i = 0; i < n; ++i) {
    const Rational unit = M(i, i) / rpow(p, valuation(M(i, i), p));
    if (unit == 1) continue;
    for (int r = 0; r <= i; ++r) M(r, i) /= unit;
  }
  for (int j = 1; j < n; ++j) {
    for (int i = j - 1; i >= 0; --i) {
      const Rational target = reduce_mod_power(M(i, j), p, valuation(M(i, i), p));
      if (target == M(i, j)) continue;
      const Rational q = (M(i, j) - target) / M(i, i);
      for (int k = 0; k <= i; ++k)
        if (M(k, i) != 0) M(k, j) -= q * M(k, i);
    }
  }
  return CosetRep(std::move(M));
}

CosetRep CosetRep::of_gl(const GMatrix& g) { return CosetRep(coset_canonical(g)); }

std::vector<std::int64_t> CosetRep::exponents() const {
  std::vector<std::int64_t> e(static_cast<std::size_t>(n()));
  for (int i = 0; i < n(); ++i) e[static_cast<std::size_t>(i)] = valuation(b_(i, i), b_.prime());
  return e;
}

bool operator<(const CosetRep& a, const CosetRep& b) {
  if (a.n() != b.n()) return a.n() < b.n();
  for (int i = 0; i < a.n(); ++i)
    for (int j = i; j < a.n(); ++j) {
      const int c = cmp(a.b_(i, j), b.b_(i, j));
      if (c != 0) return c < 0;
    }
  return false;
}

nlohmann::json CosetRep::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < n(); ++i)
    for (int k = i; k < n(); ++k) j.push_back(lbirch::to_string(b_(i, k)));
  return j;
}

CosetRep coset_product(const CosetRep& r, const CosetRep& s) { return CosetRep::canonicalize(r.matrix() * s.matrix()); }

GMatrix random_integral(std::mt19937_64& rng, int n, std::int64_t p, HeckeKind kind) {
  const std::int64_t span = ipow(p, 3);
  std::uniform_int_distribution<std::int64_t> d(-span, span);
  for (;;) {
    GMatrix k(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (kind == HeckeKind::Parabolic && i > j) continue;
        std::int64_t x = d(rng);
        if (kind == HeckeKind::Parabolic && i == j)
          while (x % p == 0) x = d(rng);
        k(i, j) = x;
      }
    const Rational det = k.det();
    if (det != 0 && valuation(det, p) == 0) return k;
  }
}

HeckeQ double_coset(int n, std::int64_t p, const std::vector<std::int64_t>& a, HeckeKind kind) {
  if (static_cast<int>(a.size()) != n) throw std::invalid_argument("double_coset: exponent length");
  const auto gens = group_generators(n, p, kind);
  std::set<CosetRep> seen;
  std::deque<CosetRep> todo;
  CosetRep start = CosetRep::canonicalize(varpi_power(a, p));
  seen.insert(start);
  todo.push_back(start);
  while (!todo.empty()) {
    CosetRep r = todo.front();
    todo.pop_front();
    for (const auto& k : gens) {
      CosetRep s = CosetRep::label(k * r.matrix(), kind);
      if (seen.insert(s).second) todo.push_back(s);
    }
  }
  HeckeQ h(n, p, kind);
  for (const auto& r : seen) h.add(r, Rational(1));
  require_invariant(h, "double_coset");
  return h;
}

HeckeQ t_op(int n, std::int64_t p, int nu) {
  if (nu < 0 || nu > n) throw std::invalid_argument("t_op: index out of range");
  std::vector<std::int64_t> a(static_cast<std::size_t>(n), 0);
  for (int i = n - nu; i < n; ++i) a[static_cast<std::size_t>(i)] = 1;
  return double_coset(n, p, a, HeckeKind::Spherical);
}

HeckeQ u_op(int n, std::int64_t p, int i) {
  if (i < 1 || i > n) throw std::invalid_argument("u_op: index out of range");
  std::vector<std::int64_t> a(static_cast<std::size_t>(n), 0);
  a[static_cast<std::size_t>(i - 1)] = 1;
  return double_coset(n, p, a, HeckeKind::Parabolic);
}

HeckeQ v_op_block(int n, std::int64_t p, int nu) {
  if (nu < 0 || nu > n) throw std::invalid_argument("v_op: index out of range");
  if (nu == 0) return HeckeQ::unit(n, p, HeckeKind::Parabolic, Rational(1));
  const int cells = nu * (n - nu);
  std::vector<std::int64_t> digit(static_cast<std::size_t>(cells), 0);
  HeckeQ h(n, p, HeckeKind::Parabolic);
  for (;;) {
    GMatrix b = GMatrix::identity(n, p);
    for (int i = 0; i < nu; ++i) b(i, i) = p;
    for (int c = 0; c < cells; ++c) b(c / (n - nu), nu + c % (n - nu)) = digit[static_cast<std::size_t>(c)];
    h.add(CosetRep::canonicalize(b), Rational(1));
    int c = 0;
    while (c < cells && ++digit[static_cast<std::size_t>(c)] == p) digit[static_cast<std::size_t>(c++)] = 0;
    if (c == cells) break;
  }
  require_invariant(h, "v_op_block");
  return h;
}

HeckeQ v_op_product(int n, std::int64_t p, int nu) {
  if (nu < 0 || nu > n) throw std::invalid_argument("v_op: index out of range");
  HeckeQ h = HeckeQ::unit(n, p, HeckeKind::Parabolic, Rational(1));
  for (int i = 1; i <= nu; ++i) h = h * u_op(n, p, i);
  return h.scaled(rpow(p, -static_cast<std::int64_t>(nu) * (nu - 1) / 2));
}

HeckeQ v_op_double(int n, std::int64_t p, int nu) {
  if (nu < 0 || nu > n) throw std::invalid_argument("v_op: index out of range");
  std::vector<std::int64_t> a(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < nu; ++i) a[static_cast<std::size_t>(i)] = 1;
  return double_coset(n, p, a, HeckeKind::Parabolic);
}

HeckeQ t_coset_double(int n, std::int64_t p) {
  std::vector<std::int64_t> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = n - 1 - i;
  return double_coset(n, p, a, HeckeKind::Parabolic);
}

HeckeQ t_coset_list(int n, std::int64_t p) {
  const GMatrix t = t_p_matrix(n, p);
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cells.emplace_back(i, j);
  std::vector<std::int64_t> digit(cells.size(), 0);
  HeckeQ h(n, p, HeckeKind::Parabolic);
  for (;;) {
    GMatrix u = GMatrix::identity(n, p);
    for (std::size_t c = 0; c < cells.size(); ++c) u(cells[c].first, cells[c].second) = digit[c];
    h.add(CosetRep::canonicalize(u * t), Rational(1));
    std::size_t c = 0;
    while (c < cells.size() && ++digit[c] == ipow(p, cells[c].second - cells[c].first)) digit[c++] = 0;
    if (c == cells.size()) break;
  }
  require_invariant(h, "t_coset_list");
  return h;
}

HeckeQ t_coset_product(int n, std::int64_t p) {
  HeckeQ h = HeckeQ::unit(n, p, HeckeKind::Parabolic, Rational(1));
  for (int nu = 1; nu < n; ++nu) h = h * v_op_block(n, p, nu);
  return h;
}

HeckeQ epsilon_embed(const HeckeQ& A, int trials, std::uint64_t seed) {
  if (A.kind() != HeckeKind::Spherical) throw std::invalid_argument("epsilon_embed: element is not spherical");
  std::mt19937_64 rng(seed);
  for (const auto& [r, a] : A.terms()) {
    for (int t = 0; t < trials; ++t) {
      const GMatrix k = random_integral(rng, A.n(), A.prime(), HeckeKind::Spherical);
      if (!(CosetRep::canonicalize(iwasawa_bk(r.matrix() * k).b) == r))
        throw std::logic_error("epsilon_embed: image depends on the coset representative");
    }
  }
  return A.with_kind(HeckeKind::Parabolic);
}

SphericalOracle::Cell SphericalOracle::cell(const GMatrix& g) const {
  const GMatrix b = coset_canonical(g);
  Cell c;
  c.e.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) c.e[static_cast<std::size_t>(i)] = valuation(b(i, i), p_);
  c.dominant = dominant(c.e);
  if (!c.dominant) return c;
  // b = u varpi^e with u_{i,i+1} = b_{i,i+1} p^{-e_{i+1}}
  Rational s = 0;
  for (int i = 0; i + 1 < n_; ++i) s += b(i, i + 1) / b(i + 1, i + 1);
  c.phase = psi_eval(s, p_);
  return c;
}

const SymbolicScalar& SphericalOracle::shintani(const std::vector<std::int64_t>& e) {
  auto it = cache_.find(e);
  if (it == cache_.end()) it = cache_.emplace(e, shintani_value(n_, p_, e)).first;
  return it->second;
}

SymbolicScalar SphericalOracle::operator()(const GMatrix& g) {
  Cell c = cell(g);
  if (!c.dominant) return SymbolicScalar(n_, p_);
  return shintani(c.e) * c.phase;
}

nlohmann::json GritsenkoReport::to_json() const {
  return {{"n", n}, {"p", p}, {"coefficient_ok", coefficient_ok}, {"product_order", "increasing indices"},
          {"u_commute", u_commute}, {"u_commute_witness", u_commute_witness}, {"pass", pass}, {"witness", witness}};
}

GritsenkoReport gritsenko_check(int n, std::int64_t p) {
  GritsenkoReport rep;
  rep.n = n;
  rep.p = p;
  std::vector<HeckeQ> U;
  for (int i = 1; i <= n; ++i) U.push_back(u_op(n, p, i));
  std::vector<HeckeQ> E(static_cast<std::size_t>(n + 1), zero_element(n, p, HeckeKind::Parabolic));
  E[0] = HeckeQ::unit(n, p, HeckeKind::Parabolic, Rational(1));
  for (int i = 1; i <= n; ++i)
    for (int nu = i; nu >= 1; --nu) E[static_cast<std::size_t>(nu)] += E[static_cast<std::size_t>(nu - 1)] * U[static_cast<std::size_t>(i - 1)];
  rep.pass = true;
  for (int nu = 0; nu <= n; ++nu) {
    HeckeQ rhs = epsilon_embed(t_op(n, p, nu)).scaled(rpow(p, static_cast<std::int64_t>(nu) * (nu - 1) / 2));
    const bool ok = E[static_cast<std::size_t>(nu)].terms() == rhs.terms();
    rep.coefficient_ok.push_back(ok);
    if (!ok && rep.witness.is_null())
      rep.witness = {{"nu", nu}, {"e_nu", E[static_cast<std::size_t>(nu)].to_json()}, {"scaled_eps_T", rhs.to_json()}};
    rep.pass = rep.pass && ok;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& a = U[static_cast<std::size_t>(i)];
      const auto& b = U[static_cast<std::size_t>(j)];
      if (!((a * b) == (b * a)) && rep.u_commute) {
        rep.u_commute = false;
        rep.u_commute_witness = {{"i", i + 1}, {"j", j + 1}, {"UiUj", (a * b).to_json()}, {"UjUi", (b * a).to_json()}};
      }
    }
  return rep;
}

nlohmann::json VLemmaReport::to_json() const {
  return {{"n", n}, {"p", p}, {"constructions_agree", constructions_agree}, {"commute", commute},
          {"t_coset_ok", t_coset_ok}, {"t_coset_count", t_coset_count}, {"pass", pass}};
}

VLemmaReport v_lemma_check(int n, std::int64_t p) {
  VLemmaReport rep;
  rep.n = n;
  rep.p = p;
  rep.pass = true;
  std::vector<HeckeQ> V;
  for (int nu = 1; nu <= n; ++nu) {
    HeckeQ block = v_op_block(n, p, nu);
    const bool ok = block == v_op_product(n, p, nu) && block == v_op_double(n, p, nu);
    rep.constructions_agree.push_back(ok);
    rep.pass = rep.pass && ok;
    V.push_back(std::move(block));
  }
  for (std::size_t a = 0; a < V.size(); ++a)
    for (std::size_t b = a + 1; b < V.size(); ++b)
      if (!((V[a] * V[b]) == (V[b] * V[a]))) rep.commute = false;
  HeckeQ list = t_coset_list(n, p);
  rep.t_coset_count = static_cast<std::int64_t>(list.size());
  rep.t_coset_ok = list == t_coset_double(n, p) && list == t_coset_product(n, p);
  rep.pass = rep.pass && rep.commute && rep.t_coset_ok;
  return rep;
}

SymbolicScalar satake_eigenvalue(const HeckeQ& A, std::uint64_t seed) {
  if (A.kind() != HeckeKind::Spherical) throw std::invalid_argument("satake_eigenvalue: element is not spherical");
  const int n = A.n();
  const std::int64_t p = A.prime();
  SphericalOracle w(n, p);
  SymbolicScalar c = hecke_act(A, w, GMatrix::identity(n, p));
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<std::int64_t> e(static_cast<std::size_t>(n));
    do {
      for (auto& x : e) x = std::uniform_int_distribution<int>(-2, 2)(rng);
      std::sort(e.rbegin(), e.rend());
    } while (n > 1 && e.front() == e.back());  // central varpi^e would prove nothing
    const GMatrix g = varpi_power(e, p);
    if (!(hecke_act(A, w, g) == c * w(g))) throw std::domain_error("satake_eigenvalue: not an eigenfunction");
  }
  return c;
}

nlohmann::json SatakeReport::to_json() const {
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& v : t_values) vals.push_back(v.to_string());
  nlohmann::json j = {{"n", n},
                      {"p", p},
                      {"t_values", vals},
                      {"normalization", "qhalf^{nu(n-nu)} sigma_nu(x)"},
                      {"t_values_expected", t_values_expected},
                      {"morphism", morphism},
                      {"symmetric", symmetric},
                      {"display_form", "p^{nu(nu+1)/2} sigma_nu(X)"},
                      {"display_qhalf_offset", display_qhalf_offset},
                      {"uniform_rescaling", uniform_rescaling},
                      {"pass", pass}};
  if (uniform_rescaling) j["uniform_rescaling_exponent"] = uniform_rescaling_exponent;
  return j;
}

SatakeReport satake_check(int n, std::int64_t p) {
  SatakeReport rep;
  rep.n = n;
  rep.p = p;
  std::vector<HeckeQ> T;
  for (int nu = 0; nu <= n; ++nu) T.push_back(t_op(n, p, nu));
  rep.t_values_expected = true;
  rep.symmetric = true;
  for (int nu = 0; nu <= n; ++nu) {
    SymbolicScalar s = satake_eigenvalue(T[static_cast<std::size_t>(nu)]);
    SymbolicScalar expected = SymbolicScalar::qhalf_pow(n, p, static_cast<std::int64_t>(nu) * (n - nu)) * elementary(n, p, nu);
    rep.t_values_expected = rep.t_values_expected && s == expected;
    rep.symmetric = rep.symmetric && s.is_symmetric();
    rep.t_values.push_back(std::move(s));
  }
  rep.morphism = true;
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b) {
      SymbolicScalar s = satake_eigenvalue(T[static_cast<std::size_t>(a)] * T[static_cast<std::size_t>(b)]);
      rep.symmetric = rep.symmetric && s.is_symmetric();
      rep.morphism = rep.morphism && s == rep.t_values[static_cast<std::size_t>(a)] * rep.t_values[static_cast<std::size_t>(b)];
    }
  if (n >= 1) {
    SymbolicScalar cube = satake_eigenvalue(T[1] * T[1] * T[1]);
    rep.morphism = rep.morphism && cube == rep.t_values[1].pow(3);
  }
  // computed / display = qhalf^{nu(n-nu) - nu(nu+1)} at X = x
  rep.uniform_rescaling = n >= 1;
  for (int nu = 1; nu <= n; ++nu) {
    const std::int64_t d = static_cast<std::int64_t>(nu) * (n - nu) - static_cast<std::int64_t>(nu) * (nu + 1);
    rep.display_qhalf_offset.push_back(d);
    if (d % nu != 0 || d / nu != rep.display_qhalf_offset[0]) rep.uniform_rescaling = false;
  }
  if (rep.uniform_rescaling) rep.uniform_rescaling_exponent = rep.display_qhalf_offset[0];
  rep.pass = rep.t_values_expected && rep.morphism && rep.symmetric;
  return rep;
}

HeckeSym modification_operator(int n, std::int64_t p, const std::vector<SymbolicScalar>& lambdas) {
  if (static_cast<int>(lambdas.size()) != n - 1) throw std::invalid_argument("modification_operator: need n-1 roots");
  std::vector<HeckeSym> V;
  for (int j = 0; j <= n; ++j) V.push_back(to_sym(v_op_block(n, p, j), n));
  HeckeSym acc = HeckeSym::unit(n, p, HeckeKind::Parabolic, sym_const(n, p, 1));
  for (int i = 1; i <= n - 1; ++i)
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      const SymbolicScalar c = lambdas[static_cast<std::size_t>(i - 1)] * sym_const(n, p, rpow(p, 1 - j));
      HeckeSym factor = V[static_cast<std::size_t>(j - 1)].scaled(c) - V[static_cast<std::size_t>(j)];
      acc = acc * factor;
    }
  return acc;
}

std::vector<std::pair<std::vector<std::int64_t>, WeylElement>> eigen_keys(int n, int radius) {
  std::vector<std::pair<std::vector<std::int64_t>, WeylElement>> keys;
  std::vector<std::int64_t> e(static_cast<std::size_t>(n), -radius);
  const auto weyl = WeylElement::all(n);
  for (;;) {
    for (const auto& w : weyl)
      if (supported(e, w)) keys.emplace_back(e, w);
    int i = 0;
    while (i < n && ++e[static_cast<std::size_t>(i)] > radius) e[static_cast<std::size_t>(i++)] = -radius;
    if (i == n) break;
  }
  return keys;
}

nlohmann::json EigenReport::to_json() const {
  return {{"n", n},          {"p", p},
          {"keys", keys},    {"operator_cosets", operator_size},
          {"eigen_ok", eigen_ok}, {"nonvanishing", nonvanishing},
          {"v_product_ok", v_product_ok}, {"pass", pass},
          {"scope", scope}};
}

EigenReport modification_eigen_check(int n, std::int64_t p, int radius) {
  EigenReport rep;
  rep.n = n;
  rep.p = p;
  std::vector<SymbolicScalar> lambdas;
  for (int i = 0; i + 1 < n; ++i)
    lambdas.push_back(SymbolicScalar::qhalf_pow(n, p, n - 1) * SymbolicScalar::variable(n, p, i));
  const HeckeSym psi = modification_operator(n, p, lambdas);
  rep.operator_size = psi.size();
  const auto keys = eigen_keys(n, radius);
  rep.keys = keys.size();
  rep.scope = "identity in x_1..x_n and qhalf at every supported (e, omega) with |e_i| <= " + std::to_string(radius);
  SphericalOracle w(n, p);
  std::vector<GMatrix> points;
  std::vector<SymbolicScalar> base;
  for (const auto& [e, om] : keys) {
    points.push_back(varpi_power(e, p) * om.matrix(p));
    base.push_back(w.act(psi, points.back()));
    if (!base.back().is_zero()) rep.nonvanishing = true;
  }
  SymbolicScalar kappa_hat = sym_const(n, p, 1);
  SymbolicScalar prod = sym_const(n, p, 1);
  rep.pass = rep.nonvanishing;
  for (int nu = 1; nu <= n - 1; ++nu) {
    prod *= lambdas[static_cast<std::size_t>(nu - 1)];
    const SymbolicScalar eta = prod * sym_const(n, p, rpow(p, -static_cast<std::int64_t>(nu) * (nu - 1) / 2));
    kappa_hat *= eta;
    const HeckeSym vpsi = to_sym(v_op_block(n, p, nu), n) * psi;
    bool ok = true;
    for (std::size_t k = 0; k < points.size() && ok; ++k) ok = w.act(vpsi, points[k]) == eta * base[k];
    rep.eigen_ok.push_back(ok);
    rep.pass = rep.pass && ok;
  }
  const HeckeSym vall = to_sym(t_coset_product(n, p), n) * psi;
  rep.v_product_ok = true;
  for (std::size_t k = 0; k < points.size() && rep.v_product_ok; ++k)
    rep.v_product_ok = w.act(vall, points[k]) == kappa_hat * base[k];
  rep.pass = rep.pass && rep.v_product_ok;
  return rep;
}

PPower PPower::of(const Rational& x, std::int64_t p) {
  if (x == 0) throw std::domain_error("PPower: zero");
  const std::int64_t v = valuation(x, p);
  Rational u = x / rpow(p, v);
  u.canonicalize();
  return {u, Rational(v)};
}

PPower PPower::pow(std::int64_t k) const {
  PPower out{1, exp * k};
  const Rational base = k >= 0 ? unit : Rational(1 / unit);
  for (std::int64_t i = 0; i < (k >= 0 ? k : -k); ++i) out.unit *= base;
  return out;
}

PPower PPower::inverse() const { return {Rational(1 / unit), Rational(-exp)}; }

Rational PPower::value(std::int64_t p) const {
  if (exp.get_den() != 1) throw std::domain_error("PPower: half-integral exponent has no rational value");
  return unit * rpow(p, exp.get_num().get_si());
}

nlohmann::json PPower::to_json() const { return {{"unit", lbirch::to_string(unit)}, {"p_exponent", lbirch::to_string(exp)}}; }

nlohmann::json KappaReport::to_json() const {
  return {{"ordinary", ordinary}, {"order", order}, {"kappa", kappa.to_json()}, {"kappa_hat", kappa_hat.to_json()},
          {"kappa_hat_unit", kappa_hat_unit}};
}

KappaReport ordinarity_and_kappa(int n, std::int64_t p, const std::vector<PPower>& roots) {
  if (static_cast<int>(roots.size()) < n - 1) throw std::invalid_argument("ordinarity_and_kappa: need n-1 roots");
  std::vector<PPower> r;
  for (const auto& x : roots) {
    PPower u = PPower::of(x.unit, p);
    r.push_back({u.unit, u.exp + x.exp});
  }
  KappaReport rep;
  rep.ordinary = true;
  std::vector<bool> used(r.size(), false);
  for (int i = 0; i + 1 < n; ++i) {
    int found = -1;
    for (std::size_t k = 0; k < r.size(); ++k)
      if (!used[k] && r[k].exp == i) {
        found = static_cast<int>(k);
        break;
      }
    if (found < 0) {
      rep.ordinary = false;
      break;
    }
    used[static_cast<std::size_t>(found)] = true;
    rep.order.push_back(found);
  }
  if (!rep.ordinary) {
    rep.order.clear();
    for (int i = 0; i + 1 < n; ++i) rep.order.push_back(i);
  }
  for (int nu = 1; nu <= n - 1; ++nu)
    rep.kappa = rep.kappa * r[static_cast<std::size_t>(rep.order[static_cast<std::size_t>(nu - 1)])].pow(n - nu);
  rep.kappa_hat = rep.kappa * PPower{1, Rational(-static_cast<std::int64_t>(n) * (n - 1) * (n - 2) / 6)};
  rep.kappa_hat_unit = rep.kappa_hat.exp == 0;
  if (rep.ordinary && !rep.kappa_hat_unit) throw std::logic_error("ordinarity_and_kappa: ordinary kappa-hat is not a unit");
  return rep;
}

}  // namespace lbirch
