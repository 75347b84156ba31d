#include "lbirch/measures.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace lbirch {

PAdicDistribution::PAdicDistribution(std::int64_t p, int depth) : p_(p), depth_(depth) {
  if (!is_prime(p)) throw std::invalid_argument("PAdicDistribution: p must be prime");
  if (depth < 1) throw std::invalid_argument("PAdicDistribution: depth must be >= 1");
  for (int m = 1; m <= depth; ++m) v_.emplace_back(static_cast<std::size_t>(ipow(p, m)));
}

std::vector<std::int64_t> PAdicDistribution::units(int m) const {
  std::vector<std::int64_t> out;
  const std::int64_t q = modulus(m);
  for (std::int64_t x = 1; x < q; ++x)
    if (x % p_ != 0) out.push_back(x);
  return out;
}

void PAdicDistribution::check_slot(int m, std::int64_t residue) const {
  if (m < 1 || m > depth_) throw std::out_of_range("PAdicDistribution: level " + std::to_string(m));
  if (residue < 0 || residue >= modulus(m) || residue % p_ == 0)
    throw std::out_of_range("PAdicDistribution: not a unit residue " + std::to_string(residue));
}

const CyclotomicNumber& PAdicDistribution::at(int m, std::int64_t residue) const {
  check_slot(m, residue);
  return v_[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(residue)];
}

void PAdicDistribution::set(int m, std::int64_t residue, CyclotomicNumber v) {
  check_slot(m, residue);
  v_[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(residue)] = std::move(v);
}

void PAdicDistribution::fill_below(int m) {
  if (m < 1 || m > depth_) throw std::out_of_range("fill_below: level");
  for (int k = m - 1; k >= 1; --k) {
    const std::int64_t q = modulus(k);
    auto& lo = v_[static_cast<std::size_t>(k - 1)];
    const auto& hi = v_[static_cast<std::size_t>(k)];
    const auto us = units(k);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t i = 0; i < us.size(); ++i) {
      CyclotomicNumber s;
      for (std::int64_t a = 0; a < p_; ++a) s += hi[static_cast<std::size_t>(us[i] + a * q)];
      lo[static_cast<std::size_t>(us[i])] = std::move(s);
    }
  }
}

PAdicDistribution PAdicDistribution::scaled_by_level(const std::function<CyclotomicNumber(int)>& f) const {
  PAdicDistribution out = *this;
  for (int m = 1; m <= depth_; ++m) {
    const CyclotomicNumber s = f(m);
    for (auto x : units(m)) out.v_[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(x)] *= s;
  }
  return out;
}

bool operator==(const PAdicDistribution& a, const PAdicDistribution& b) {
  return a.p_ == b.p_ && a.depth_ == b.depth_ && a.v_ == b.v_;
}

nlohmann::json PAdicDistribution::to_json() const {
  nlohmann::json levels = nlohmann::json::array();
  for (int m = 1; m <= depth_; ++m) {
    nlohmann::json vals = nlohmann::json::object();
    for (auto x : units(m)) vals[std::to_string(x)] = at(m, x).to_json();
    levels.push_back({{"m", m}, {"values", vals}});
  }
  return {{"p", p_}, {"depth", depth_}, {"scalar_encoding", "cyclotomic"}, {"levels", levels}};
}

PAdicDistribution PAdicDistribution::from_json(const nlohmann::json& j) {
  PAdicDistribution out(j.at("p").get<std::int64_t>(), j.at("depth").get<int>());
  for (const auto& lv : j.at("levels")) {
    const int m = lv.at("m").get<int>();
    for (const auto& [k, v] : lv.at("values").items()) out.set(m, std::stoll(k), CyclotomicNumber::from_json(v));
  }
  return out;
}

PAdicDistribution dirac_distribution(std::int64_t p, int depth, std::int64_t a) {
  PAdicDistribution mu(p, depth);
  const std::int64_t q = mu.modulus(depth);
  const std::int64_t r = ((a % q) + q) % q;
  mu.set(depth, r, CyclotomicNumber(1));
  mu.fill_below(depth);
  return mu;
}

PAdicDistribution haar_distribution(std::int64_t p, int depth) {
  PAdicDistribution mu(p, depth);
  for (int m = 1; m <= depth; ++m) {
    const Rational v(1, (p - 1) * ipow(p, m - 1));
    for (auto x : mu.units(m)) mu.set(m, x, CyclotomicNumber(v));
  }
  return mu;
}

PAdicDistribution random_distribution(std::int64_t p, int depth, std::uint64_t seed, int bound) {
  PAdicDistribution mu(p, depth);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-bound, bound);
  for (auto x : mu.units(depth)) mu.set(depth, x, CyclotomicNumber(dist(rng)));
  mu.fill_below(depth);
  return mu;
}

nlohmann::json RelationResult::to_json() const {
  nlohmann::json j = {{"pass", pass}};
  if (!pass)
    j["witness"] = {{"level", level}, {"residue", residue}, {"stored", stored.to_json()},
                    {"sum_over_lifts", lifted_sum.to_json()}};
  return j;
}

RelationResult check_relation(const PAdicDistribution& mu) {
  RelationResult r;
  const std::int64_t p = mu.prime();
  for (int m = 1; m < mu.depth(); ++m) {
    const std::int64_t q = mu.modulus(m);
    for (auto x : mu.units(m)) {
      CyclotomicNumber s;
      for (std::int64_t a = 0; a < p; ++a) s += mu.at(m + 1, x + a * q);
      if (!(s == mu.at(m, x))) {
        r.pass = false;
        r.level = m;
        r.residue = x;
        r.stored = mu.at(m, x);
        r.lifted_sum = s;
        return r;
      }
    }
  }
  return r;
}

namespace {

// Power-sum accumulation of c * zeta_L^{shift} * v for v at a level dividing L.
void accumulate(std::vector<Rational>& acc, std::int64_t L, std::int64_t shift, const CyclotomicNumber& v) {
  const std::int64_t stride = L / v.level();
  const auto& c = v.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    acc[static_cast<std::size_t>((shift + static_cast<std::int64_t>(i) * stride) % L)] += c[i];
  }
}

std::int64_t char_exponent(const MultChar& chi, std::int64_t x) { return chi.exponent(x % chi.modulus()); }

}  // namespace

CyclotomicNumber integrate_character_at(const PAdicDistribution& mu, const MultChar& chi, int m) {
  if (chi.prime() != mu.prime()) throw std::invalid_argument("integrate_character: prime mismatch");
  if (m < std::max(chi.conductor(), 1) || m > mu.depth())
    throw std::domain_error("integrate_character: level " + std::to_string(m) + " outside [conductor, depth]");
  const auto us = mu.units(m);
  std::int64_t L = chi.level();
  for (auto x : us) L = lcm64(L, mu.at(m, x).level());
  std::vector<Rational> acc(static_cast<std::size_t>(L));
  const std::int64_t cs = L / chi.level();
  for (auto x : us) accumulate(acc, L, char_exponent(chi, x) * cs, mu.at(m, x));
  return CyclotomicNumber::from_power_sums(L, acc);
}

CyclotomicNumber integrate_character(const PAdicDistribution& mu, const MultChar& chi) {
  const int lo = std::max(chi.conductor(), 1);
  if (lo > mu.depth()) throw std::domain_error("integrate_character: conductor exceeds stored depth");
  CyclotomicNumber v = integrate_character_at(mu, chi, lo);
  for (int m = lo + 1; m <= mu.depth(); ++m)
    if (!(integrate_character_at(mu, chi, m) == v))
      throw std::logic_error("integrate_character: integral depends on the level " + std::to_string(m));
  return v;
}

namespace {

struct SparseRow {
  std::vector<std::int64_t> idx;  // exponents at level L
  std::vector<Rational> val;
  bool dense = false;             // idx[t] == t
};

SparseRow sparse_lift(const CyclotomicNumber& v, std::int64_t L) {
  SparseRow r;
  const std::int64_t stride = L / v.level();
  const auto& c = v.coeffs();
  std::size_t nnz = 0;
  for (const auto& q : c) nnz += q != 0;
  if (stride == 1 && 2 * nnz >= c.size()) {
    r.dense = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
      r.idx.push_back(static_cast<std::int64_t>(i));
      r.val.push_back(c[i]);
    }
    return r;
  }
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) {
      r.idx.push_back(static_cast<std::int64_t>(i) * stride);
      r.val.push_back(c[i]);
    }
  return r;
}

// out_j = scale * sum_x zeta_L^{shift[j][x]} rows[x]. Integer kernel when the
// common-denominator numerators leave headroom, exact rationals otherwise.
std::vector<CyclotomicNumber> twisted_sums(std::int64_t L, const std::vector<std::vector<std::int64_t>>& shift,
                                           const std::vector<SparseRow>& rows, const Rational& scale) {
  const std::size_t J = shift.size();
  std::vector<CyclotomicNumber> out(J);
  Integer den = 1;
  std::size_t maxnnz = 0;
  for (const auto& r : rows) {
    for (const auto& q : r.val) den = lcm(den, Integer(q.get_den()));
    maxnnz = std::max(maxnnz, r.val.size());
  }
  Integer maxabs = 0;
  for (const auto& r : rows)
    for (const auto& q : r.val) {
      Integer a = abs(Integer(q.get_num() * (den / q.get_den())));
      if (a > maxabs) maxabs = a;
    }
  const Integer bound = maxabs * Integer(static_cast<unsigned long>(rows.size())) *
                        Integer(static_cast<unsigned long>(std::max<std::size_t>(maxnnz, 1)));
  const bool fast = bound < Integer(std::numeric_limits<std::int64_t>::max() / 2) && den.fits_slong_p();
  if (fast) {
    std::vector<std::vector<std::int64_t>> ival(rows.size());
    for (std::size_t x = 0; x < rows.size(); ++x)
      for (const auto& q : rows[x].val) ival[x].push_back(Integer(q.get_num() * (den / q.get_den())).get_si());
    const Rational s = scale / Rational(den);
#pragma omp parallel
    {
      std::vector<std::int64_t> acc(static_cast<std::size_t>(2 * L));
#pragma omp for schedule(dynamic, 4)
      for (std::size_t j = 0; j < J; ++j) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t x = 0; x < rows.size(); ++x) {
          std::int64_t* base = acc.data() + shift[j][x];
          const auto& id = rows[x].idx;
          const auto& iv = ival[x];
          if (rows[x].dense) {
            const std::int64_t* src = iv.data();
            for (std::size_t t = 0; t < iv.size(); ++t) base[t] += src[t];
          } else {
            for (std::size_t t = 0; t < id.size(); ++t) base[id[t]] += iv[t];
          }
        }
        std::vector<std::int64_t> folded(static_cast<std::size_t>(L));
        for (std::int64_t t = 0; t < L; ++t) folded[static_cast<std::size_t>(t)] = acc[t] + acc[t + L];
        CyclotomicNumber v = CyclotomicNumber::from_power_sums(L, folded);
        v *= CyclotomicNumber(s);
        out[j] = std::move(v);
      }
    }
    return out;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t j = 0; j < J; ++j) {
    std::vector<Rational> acc(static_cast<std::size_t>(L));
    for (std::size_t x = 0; x < rows.size(); ++x)
      for (std::size_t t = 0; t < rows[x].idx.size(); ++t)
        acc[static_cast<std::size_t>((shift[j][x] + rows[x].idx[t]) % L)] += rows[x].val[t];
    CyclotomicNumber v = CyclotomicNumber::from_power_sums(L, acc);
    v *= CyclotomicNumber(scale);
    out[j] = std::move(v);
  }
  return out;
}

}  // namespace

std::vector<CyclotomicNumber> fourier_transform(const PAdicDistribution& mu) {
  const int M = mu.depth();
  const auto chars = enumerate_all_chars(mu.prime(), M);
  const auto us = mu.units(M);
  const std::int64_t N = chars.front().level();
  std::int64_t L = N;
  for (auto x : us) L = lcm64(L, mu.at(M, x).level());
  std::vector<SparseRow> rows;
  for (auto x : us) rows.push_back(sparse_lift(mu.at(M, x), L));
  std::vector<std::vector<std::int64_t>> shift(chars.size(), std::vector<std::int64_t>(us.size()));
  for (std::size_t j = 0; j < chars.size(); ++j)
    for (std::size_t i = 0; i < us.size(); ++i) shift[j][i] = chars[j].exponent(us[i]) * (L / N);
  return twisted_sums(L, shift, rows, Rational(1));
}

std::vector<CyclotomicNumber> fourier_transform_reference(const PAdicDistribution& mu) {
  std::vector<CyclotomicNumber> out;
  for (const auto& chi : enumerate_all_chars(mu.prime(), mu.depth()))
    out.push_back(integrate_character_at(mu, chi, mu.depth()));
  return out;
}

PAdicDistribution fourier_inverse(std::int64_t p, int M, const std::vector<CyclotomicNumber>& targets) {
  PAdicDistribution mu(p, M);
  const auto chars = enumerate_all_chars(p, M);
  if (targets.size() != chars.size())
    throw std::invalid_argument("fourier_inverse: need " + std::to_string(chars.size()) + " targets, got " +
                                std::to_string(targets.size()));
  const auto us = mu.units(M);
  const std::int64_t N = chars.front().level();
  std::int64_t L = N;
  for (const auto& t : targets) L = lcm64(L, t.level());
  std::vector<SparseRow> rows;
  for (const auto& t : targets) rows.push_back(sparse_lift(t, L));
  std::vector<std::vector<std::int64_t>> shift(us.size(), std::vector<std::int64_t>(chars.size()));
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t j = 0; j < chars.size(); ++j) {
      const std::int64_t e = chars[j].exponent(us[i]);
      shift[i][j] = e == 0 ? 0 : (N - e) * (L / N);
    }
  auto vals = twisted_sums(L, shift, rows, Rational(1, static_cast<long>(us.size())));
  for (std::size_t i = 0; i < us.size(); ++i) mu.set(M, us[i], std::move(vals[i]));
  mu.fill_below(M);
  return mu;
}

PAdicDistribution fourier_inverse_reference(std::int64_t p, int M, const std::vector<CyclotomicNumber>& targets) {
  PAdicDistribution mu(p, M);
  const auto chars = enumerate_all_chars(p, M);
  if (targets.size() != chars.size()) throw std::invalid_argument("fourier_inverse: incomplete targets");
  const auto us = mu.units(M);
  const Rational inv(1, static_cast<long>(us.size()));
  for (auto x : us) {
    CyclotomicNumber s;
    for (std::size_t j = 0; j < chars.size(); ++j)
      s += CyclotomicNumber::root_of_unity(chars[j].level(), -chars[j].exponent(x)) * targets[j];
    mu.set(M, x, s * CyclotomicNumber(inv));
  }
  mu.fill_below(M);
  return mu;
}

nlohmann::json OrderEstimate::to_json() const {
  nlohmann::json f = nlohmann::json::array();
  for (const auto& b : floors) f.push_back(b ? nlohmann::json(to_string(*b)) : nlohmann::json(nullptr));
  nlohmann::json j = {{"floors", f}};
  if (bounded)
    j["order"] = "bounded";
  else
    j["order"] = to_string(order);
  return j;
}

OrderEstimate order_estimate(const PAdicDistribution& mu) {
  OrderEstimate r;
  for (int m = 1; m <= mu.depth(); ++m) {
    std::optional<Rational> b;
    for (auto x : mu.units(m)) {
      const auto& v = mu.at(m, x);
      if (v.is_zero()) continue;
      Rational val = v.p_valuation(mu.prime());
      if (!b || val < *b) b = val;
    }
    r.floors.push_back(b);
  }
  int m0 = -1;
  for (int m = 0; m < mu.depth(); ++m)
    if (r.floors[static_cast<std::size_t>(m)]) {
      m0 = m;
      break;
    }
  Rational h = 0;
  if (m0 >= 0)
    for (int m = m0 + 1; m < mu.depth(); ++m) {
      const auto& b = r.floors[static_cast<std::size_t>(m)];
      if (!b) continue;
      Rational slope = (*r.floors[static_cast<std::size_t>(m0)] - *b) / Rational(m - m0);
      if (slope > h) h = slope;
    }
  r.order = h;
  r.bounded = h == 0;
  return r;
}

std::int64_t kappa_exponent(int n) {
  const std::int64_t k = n;
  return ((k + 1) * k * (k - 1) + k * (k - 1) * (k - 2)) / 6;
}

nlohmann::json InterpolationConstants::to_json() const {
  return {{"n", n},
          {"p", p},
          {"c", c},
          {"ordinary", ordinary},
          {"kappa_lambda_hat", kappa_lambda_hat.to_json()},
          {"kappa_alpha_hat", kappa_alpha_hat.to_json()},
          {"kappa", kappa.to_json()},
          {"kappa_hat", kappa_hat.to_json()},
          {"euler_factor", to_string(euler_factor)},
          {"delta", delta.to_json()}};
}

InterpolationConstants interpolation_constants(int n, std::int64_t p, int c, const std::vector<PPower>& roots_pi,
                                               const std::vector<PPower>& roots_sigma, const CyclotomicNumber& w1,
                                               const CyclotomicNumber& v1) {
  if (n < 2) throw std::invalid_argument("interpolation_constants: n >= 2");
  if (c < 1) throw std::invalid_argument("interpolation_constants: conductor exponent c >= 1");
  InterpolationConstants r;
  r.n = n;
  r.p = p;
  r.c = c;
  const KappaReport lam = ordinarity_and_kappa(n, p, roots_pi);
  const KappaReport alp = ordinarity_and_kappa(n - 1, p, roots_sigma);
  r.ordinary = lam.ordinary && alp.ordinary;
  r.kappa_lambda_hat = lam.kappa_hat;
  r.kappa_alpha_hat = alp.kappa_hat;
  const PPower K = lam.kappa_hat * alp.kappa_hat;
  const std::int64_t k = n;
  r.kappa = PPower{1, Rational(c * kappa_exponent(n))} * K.pow(-c);
  r.kappa_hat = PPower{1, Rational(c * k * (k - 1) * (k - 2) / 6)} * K.pow(-c);
  if (!(r.kappa == PPower{1, Rational(c * (k + 1) * k * (k - 1) / 6)} * r.kappa_hat))
    throw std::logic_error("interpolation_constants: kappa and kappa-hat disagree");
  r.euler_factor = 1;
  for (int nu = 1; nu <= n - 1; ++nu) r.euler_factor /= Rational(1) - rpow(p, -nu);
  r.delta = w1 * v1 * CyclotomicNumber(r.euler_factor);
  return r;
}

nlohmann::json IndexReport::to_json() const {
  return {{"n", n}, {"p", p}, {"enumerated", enumerated}, {"expected", expected}, {"t_cosets", t_cosets},
          {"pass", pass}};
}

namespace {

// (U_n(Z/p^n) : t U_n t^{-1}) by enumeration.
std::int64_t unipotent_index(int n, std::int64_t p) {
  if (n <= 1) return 1;
  std::vector<int> gap;  // j - i for each strictly upper entry
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) gap.push_back(j - i);
  const std::int64_t q = ipow(p, n);
  Integer total = 1;
  for (std::size_t t = 0; t < gap.size(); ++t) total *= q;
  if (total > Integer(1L << 26)) throw std::invalid_argument("index_formula_check: enumeration too large");
  std::vector<std::int64_t> u(gap.size(), 0);
  std::int64_t inside = 0;
  for (;;) {
    bool ok = true;
    for (std::size_t t = 0; t < gap.size() && ok; ++t) ok = u[t] % ipow(p, gap[t]) == 0;
    if (ok) ++inside;
    std::size_t t = 0;
    while (t < u.size() && ++u[t] == q) u[t++] = 0;
    if (t == u.size()) break;
  }
  return total.get_si() / inside;
}

}  // namespace

IndexReport index_formula_check(int n, std::int64_t p) {
  if (n < 1) throw std::invalid_argument("index_formula_check: n >= 1");
  IndexReport r;
  r.n = n;
  r.p = p;
  r.enumerated = unipotent_index(n, p);
  const std::int64_t k = n;
  r.expected = ipow(p, static_cast<int>((k + 1) * k * (k - 1) / 6));
  r.t_cosets = static_cast<std::int64_t>(t_coset_list(n, p).size());
  r.pass = r.enumerated == r.expected && r.t_cosets == r.expected;
  return r;
}

SyntheticMeasure synthetic_measure(int n, std::int64_t p, int depth, const std::vector<PPower>& roots_pi,
                                   const std::vector<PPower>& roots_sigma, std::uint64_t seed) {
  SyntheticMeasure s{PAdicDistribution(p, depth), PAdicDistribution(p, depth),
                     interpolation_constants(n, p, 1, roots_pi, roots_sigma, CyclotomicNumber(1), CyclotomicNumber(1)),
                     0};
  const PPower K = s.constants.kappa_lambda_hat * s.constants.kappa_alpha_hat;
  if (K.exp.get_den() != 1) throw std::invalid_argument("synthetic_measure: kappa-hat needs an integral exponent");
  s.coset_factor = unipotent_index(n, p) * unipotent_index(n - 1, p);
  const Rational step = Rational(s.coset_factor) / K.value(p);
  std::mt19937_64 rng(seed);
  // unit period on the class of 1, p-divisible elsewhere: every level keeps a unit at the class of 1
  std::uniform_int_distribution<long> unit(1, p - 1), rest(-4, 4);
  for (auto x : s.periods.units(depth))
    s.periods.set(depth, x, CyclotomicNumber(Rational(x == 1 ? unit(rng) : p * rest(rng))));
  for (int c = depth - 1; c >= 1; --c) {
    const std::int64_t q = s.periods.modulus(c);
    for (auto x : s.periods.units(c)) {
      CyclotomicNumber sum;
      for (std::int64_t a = 0; a < p; ++a) sum += s.periods.at(c + 1, x + a * q);
      s.periods.set(c, x, sum * CyclotomicNumber(step));
    }
  }
  for (int c = 1; c <= depth; ++c) {
    const PPower kc = PPower{1, Rational(c * kappa_exponent(n))} * K.pow(-c);
    const CyclotomicNumber kv(kc.value(p));
    for (auto x : s.mu.units(c)) s.mu.set(c, x, s.periods.at(c, x) * kv);
  }
  return s;
}

}  // namespace lbirch
