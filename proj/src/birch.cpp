#include "lbirch/birch.hpp"

#include <omp.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lbirch/decompose.hpp"

namespace lbirch {

namespace {

std::int64_t posmod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return posmod(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m), m);
}

std::int64_t sum_e(const std::vector<std::int64_t>& e) {
  std::int64_t s = 0;
  for (auto x : e) s += x;
  return s;
}

int sign_of(const WeylElement& w) { return w.length() % 2 ? -1 : 1; }

}  // namespace

std::int64_t rl_rep(std::int64_t x, std::int64_t p, int m, int l) {
  const std::int64_t M = ipow(p, m * l);
  const std::int64_t r = posmod(x, M);
  std::int64_t fk = 1;
  for (int k = 0; k < l; ++k, fk *= ipow(p, m)) {
    if (r == posmod(-fk, M)) {
      // for f = 2 the class of -f^{l-1} is f^{l-1}; keep the positive value
      if (r == fk) return r;
      return -fk;
    }
  }
  return r;
}

// ---------------------------------------------------------------- RepSet

RepSet::RepSet(int n, int l, int m, std::int64_t p, WeylElement omega)
    : n_(n), l_(l), m_(m), p_(p), omega_(std::move(omega)) {
  if (n < 0 || m < 1) throw std::invalid_argument("RepSet: need n >= 0, m >= 1");
  if (l < 2 * n) throw std::invalid_argument("RepSet: l must be at least 2n");
  if (omega_.n() != n) throw std::invalid_argument("RepSet: Weyl element of wrong size");
  mod_ = ipow(p, m * l);
  std::vector<int> sinv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sinv[static_cast<std::size_t>(omega_[i])] = i;
  pos_.resize(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Position& q = pos_[static_cast<std::size_t>(a * n + b)];
      if (a == b) {
        q.slot = Slot::Unit;
        q.unit_exp = m * l;
      } else if (sinv[static_cast<std::size_t>(a)] < sinv[static_cast<std::size_t>(b)]) {
        q.slot = Slot::Zero;
      } else {
        q.slot = a > b ? Slot::Ideal : Slot::Free;
      }
    }
  finish();
}

void RepSet::finish() {
  free_.clear();
  radix_.clear();
  unsigned __int128 total = 1;
  for (int k = 0; k < n_ * n_; ++k) {
    const Position& q = pos_[static_cast<std::size_t>(k)];
    std::uint64_t r = 1;
    switch (q.slot) {
      case Slot::Unit: {
        const std::int64_t pk = ipow(p_, q.unit_exp);
        r = static_cast<std::uint64_t>(pk / p_ * (p_ - 1));
        break;
      }
      case Slot::Ideal:
        r = static_cast<std::uint64_t>(mod_ / p_);
        break;
      case Slot::Free:
        r = static_cast<std::uint64_t>(mod_);
        break;
      default:
        continue;
    }
    free_.push_back(k);
    radix_.push_back(r);
    total *= r;
    if (total > static_cast<unsigned __int128>(~std::uint64_t{0} >> 1))
      throw std::overflow_error("RepSet: too many members to index");
  }
  size_ = static_cast<std::uint64_t>(total);
}

RepSet RepSet::rtilde(int n, int l, int m, std::int64_t p, const WeylElement& omega) {
  if (n < 1 || omega[n - 1] != n - 1) throw std::invalid_argument("rtilde: needs sigma(n) = n");
  RepSet s(n, l, m, p, omega);
  for (int j = 0; j < n; ++j) {
    Position& q = s.pos_[static_cast<std::size_t>((n - 1) * n + j)];
    q.slot = Slot::Fixed;
    // (f^{n-1}, -f^{n-2}, ..., -1); for n = 1 the single entry is 1
    q.value = j == 0 ? ipow(p, m * (n - 1)) : -ipow(p, m * (n - 1 - j));
  }
  s.finish();
  return s;
}

RepSet RepSet::rtilde_orbit_reps(int n, int l, int m, std::int64_t p, const WeylElement& omega) {
  RepSet s = rtilde(n, l, m, p, omega);
  for (int i = 0; i + 1 < n; ++i) s.pos_[static_cast<std::size_t>(i * n + i)].unit_exp = m * (l - n + i + 1);
  s.finish();
  return s;
}

void RepSet::decode(std::uint64_t idx, std::int64_t* out) const {
  for (int k = 0; k < n_ * n_; ++k) {
    const Position& q = pos_[static_cast<std::size_t>(k)];
    out[k] = q.slot == Slot::Fixed ? q.value : 0;
  }
  for (std::size_t t = 0; t < free_.size(); ++t) {
    const std::int64_t d = static_cast<std::int64_t>(idx % radix_[t]);
    idx /= radix_[t];
    const int k = free_[t];
    const Position& q = pos_[static_cast<std::size_t>(k)];
    std::int64_t x = 0;
    switch (q.slot) {
      case Slot::Unit:
        x = kth_unit(d, p_);
        break;
      case Slot::Ideal:
        x = d * p_;
        break;
      default:
        x = d;
    }
    out[k] = rl_rep(x, p_, m_, l_);
  }
}

std::vector<std::int64_t> RepSet::entries(std::uint64_t idx) const {
  std::vector<std::int64_t> v(static_cast<std::size_t>(n_ * n_));
  decode(idx, v.data());
  return v;
}

GMatrix int_matrix(int n, std::int64_t p, const std::int64_t* entries) {
  GMatrix g(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Rational(static_cast<long>(entries[i * n + j]));
  return g;
}

GMatrix RepSet::matrix(std::uint64_t idx) const {
  auto v = entries(idx);
  return int_matrix(n_, p_, v.data());
}

bool RepSet::contains(const std::int64_t* x) const {
  for (int k = 0; k < n_ * n_; ++k) {
    const Position& q = pos_[static_cast<std::size_t>(k)];
    const std::int64_t v = x[k];
    if (rl_rep(v, p_, m_, l_) != v) return false;
    switch (q.slot) {
      case Slot::Zero:
        if (v != 0) return false;
        break;
      case Slot::Fixed:
        if (v != q.value) return false;
        break;
      case Slot::Ideal:
        if (v % p_ != 0) return false;
        break;
      case Slot::Unit:
        if (v % p_ == 0) return false;
        if (q.unit_exp < m_ * l_ && (v < 0 || v >= ipow(p_, q.unit_exp))) return false;
        break;
      case Slot::Free:
        break;
    }
  }
  return true;
}

bool RepSet::contains(const GMatrix& r) const {
  if (r.n() != n_) return false;
  std::vector<std::int64_t> v(static_cast<std::size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const Rational& x = r(i, j);
      if (x.get_den() != 1 || !x.get_num().fits_slong_p()) return false;
      v[static_cast<std::size_t>(i * n_ + j)] = x.get_num().get_si();
    }
  return contains(v.data());
}

RepSet enumerate_reps(int n, int l, int m, std::int64_t p, const WeylElement& omega) {
  return RepSet(n, l, m, p, omega);
}

// ------------------------------------------------------- double cosets

DoubleRep canonical_double_rep(const GMatrix& g, int l, int m) {
  const int n = g.n();
  const std::int64_t p = g.prime();
  if (l < 2 * n) throw std::invalid_argument("canonical_double_rep: l must be at least 2n");
  IwasawaData d = decompose(g);
  const WeylElement& w = d.omega;
  // M = omega s omega^-1, then clear above the diagonal column by column from the right
  GMatrix M(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = d.s(w[i], w[j]);
  for (int c = n - 1; c >= 1; --c)
    for (int i = 0; i < c; ++i) {
      if (M(i, c) == 0) continue;
      const Rational x = M(i, c) / M(c, c);
      for (int j = 0; j < n; ++j)
        if (M(c, j) != 0) M(i, j) -= x * M(c, j);
      M(i, c) = 0;
    }
  GMatrix r(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Rational& x = M(i, j);
      r(w[i], w[j]) = x == 0 ? Rational(0) : Rational(static_cast<long>(rl_rep(residue_mod(x, p, m * l), p, m, l)));
    }
  return {std::move(d.e), w, std::move(r)};
}

// ------------------------------------------------------------- volumes

Rational volume(int n, int l, int m, std::int64_t p, const std::vector<std::int64_t>& e) {
  Rational v = 1;
  for (int nu = 1; nu <= n; ++nu) v /= Rational(1) - rpow(p, -nu);
  std::int64_t ex = -static_cast<std::int64_t>(m) * l * n * (n + 1) / 2;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j) ex += e[i] - e[j];
  return v * rpow(p, ex);
}

Rational volume_by_counting(int n, int l, int m, std::int64_t p) {
  if (n > 2) throw std::invalid_argument("volume_by_counting: n <= 2 only");
  const std::int64_t M = ipow(p, m * l);
  std::int64_t gl = 0, u = 0;
  if (n == 0) {
    gl = u = 1;
  } else if (n == 1) {
    for (std::int64_t a = 0; a < M; ++a) gl += a % p != 0;
    u = 1;
  } else {
    // a d - b c must be a unit; count over all of (Z/M)^4
    for (std::int64_t a = 0; a < M; ++a)
      for (std::int64_t b = 0; b < M; ++b)
        for (std::int64_t c = 0; c < M; ++c)
          for (std::int64_t d = 0; d < M; ++d) gl += posmod(a * d - b * c, p) != 0;
    // upper unipotent: (1, x; 0, 1)
    for (std::int64_t x = 0; x < M; ++x) ++u;
  }
  Rational v(u, gl);
  v.canonicalize();
  return v;
}

// -------------------------------------------------------------- orbits

std::vector<std::int64_t> torus_act(const std::vector<std::int64_t>& r, const std::vector<std::int64_t>& gamma,
                                    std::int64_t p, int m, int l) {
  const int n = static_cast<int>(gamma.size());
  const std::int64_t M = ipow(p, m * l);
  std::vector<std::int64_t> out(r.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<std::size_t>(i * n + j)] =
          rl_rep(mulmod(r[static_cast<std::size_t>(i * n + j)], gamma[static_cast<std::size_t>(j)], M), p, m, l);
  return out;
}

OrbitCount orbit_count_check(int n, int l, int m, std::int64_t p, const WeylElement& omega,
                             const std::vector<std::int64_t>& r) {
  const RepSet tilde = RepSet::rtilde(n, l, m, p, omega);
  if (!tilde.contains(r.data())) throw std::invalid_argument("orbit_count_check: r is not in R~");
  const std::int64_t M = ipow(p, m * l);
  OrbitCount out;
  out.count = 1;
  for (int j = 0; j < n; ++j) {
    std::set<std::vector<std::int64_t>> cols;
    std::int64_t accepted = 0;
    for (std::int64_t g = 1; g < M; ++g) {
      if (g % p == 0) continue;
      std::vector<std::int64_t> col(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        col[static_cast<std::size_t>(i)] = rl_rep(mulmod(r[static_cast<std::size_t>(i * n + j)], g, M), p, m, l);
      if (col.back() != r[static_cast<std::size_t>((n - 1) * n + j)]) continue;
      ++accepted;
      cols.insert(std::move(col));
    }
    if (static_cast<std::int64_t>(cols.size()) != accepted) out.faithful = false;
    out.count *= static_cast<std::int64_t>(cols.size());
  }
  out.expected = ipow(p, m * n * (n - 1) / 2);
  out.pass = out.faithful && out.count == out.expected;
  return out;
}

std::int64_t orbit_count_full_walk(int n, int l, int m, std::int64_t p, const WeylElement& omega,
                                   const std::vector<std::int64_t>& r) {
  const RepSet tilde = RepSet::rtilde(n, l, m, p, omega);
  const std::int64_t M = ipow(p, m * l);
  const std::int64_t units = M / p * (p - 1);
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(units);
  std::set<std::vector<std::int64_t>> seen;
  std::vector<std::int64_t> gamma(static_cast<std::size_t>(n));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (int i = 0; i < n; ++i) {
      gamma[static_cast<std::size_t>(i)] = kth_unit(static_cast<std::int64_t>(t % static_cast<std::uint64_t>(units)), p);
      t /= static_cast<std::uint64_t>(units);
    }
    auto s = torus_act(r, gamma, p, m, l);
    if (tilde.contains(s.data())) seen.insert(std::move(s));
  }
  return static_cast<std::int64_t>(seen.size());
}

BijectionReport rtilde_bijection_check(int n, int l, int m, std::int64_t p, const WeylElement& omega,
                                       std::uint64_t max_enum, std::uint64_t samples, std::uint64_t seed) {
  const RepSet tilde = RepSet::rtilde(n, l, m, p, omega);
  std::vector<int> sub(omega.sigma().begin(), omega.sigma().end() - 1);
  const RepSet lower(n - 1, l, m, p, WeylElement(sub));
  BijectionReport rep;
  rep.size_tilde = tilde.size();
  rep.size_lower = lower.size();
  // C_n as integers
  std::vector<std::int64_t> C(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i + 1 < n; ++i) C[static_cast<std::size_t>(i * n + i)] = 1;
  for (int j = 0; j < n; ++j)
    C[static_cast<std::size_t>((n - 1) * n + j)] = n == 1 ? 1 : (j == 0 ? ipow(p, m * (n - 1)) : -ipow(p, m * (n - 1 - j)));
  const int k = n - 1;
  auto lift = [&](const std::int64_t* g, std::int64_t* out) {
    std::vector<std::int64_t> jg(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) jg[static_cast<std::size_t>(i * n + j)] = g[i * k + j];
    jg[static_cast<std::size_t>(n * n - 1)] = 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::int64_t s = 0;
        for (int t = 0; t < n; ++t) s += jg[static_cast<std::size_t>(i * n + t)] * C[static_cast<std::size_t>(t * n + j)];
        out[i * n + j] = s;
      }
  };
  auto project_to = [&](const std::int64_t* r, std::int64_t* out) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) out[i * k + j] = r[i * n + j];
  };
  auto indices = [&](std::uint64_t size, std::uint64_t salt) {
    std::vector<std::uint64_t> idx;
    if (size <= max_enum) return idx;
    std::mt19937_64 rng(seed + salt);
    std::uniform_int_distribution<std::uint64_t> d(0, size - 1);
    for (std::uint64_t t = 0; t < samples; ++t) idx.push_back(d(rng));
    return idx;
  };
  const auto sample_t = indices(tilde.size(), 0);
  const auto sample_l = indices(lower.size(), 1);
  const std::uint64_t nt = sample_t.empty() ? tilde.size() : sample_t.size();
  const std::uint64_t nl = sample_l.empty() ? lower.size() : sample_l.size();
  bool ok = rep.size_tilde == rep.size_lower;
  long long bad = 0;
#pragma omp parallel
  {
    std::vector<std::int64_t> r(static_cast<std::size_t>(n * n)), g(static_cast<std::size_t>(k * k)),
        back(static_cast<std::size_t>(n * n));
#pragma omp for schedule(static) reduction(+ : bad)
    for (long long t = 0; t < static_cast<long long>(nt); ++t) {
      tilde.decode(sample_t.empty() ? static_cast<std::uint64_t>(t) : sample_t[static_cast<std::size_t>(t)], r.data());
      project_to(r.data(), g.data());
      lift(g.data(), back.data());
      if (!lower.contains(g.data()) || back != r) ++bad;
    }
#pragma omp for schedule(static) reduction(+ : bad)
    for (long long t = 0; t < static_cast<long long>(nl); ++t) {
      lower.decode(sample_l.empty() ? static_cast<std::uint64_t>(t) : sample_l[static_cast<std::size_t>(t)], g.data());
      lift(g.data(), r.data());
      std::vector<std::int64_t> g2(static_cast<std::size_t>(k * k));
      project_to(r.data(), g2.data());
      if (!tilde.contains(r.data()) || g2 != g) ++bad;
    }
  }
  rep.checked_tilde = nt;
  rep.checked_lower = nl;
  rep.pass = ok && bad == 0;
  return rep;
}

// -------------------------------------------------------- PairingValue

void PairingValue::add(const PairingKey& k, const CyclotomicNumber& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

PairingValue& PairingValue::operator+=(const PairingValue& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

PairingValue PairingValue::scaled(const CyclotomicNumber& c) const {
  PairingValue out;
  for (const auto& [k, x] : terms_) out.add(k, x * c);
  return out;
}

std::string PairingValue::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ") w[" << k.w.to_string() << "] v[" << k.v.to_string() << "] X^" << k.xexp;
  }
  return os.str();
}

nlohmann::json PairingValue::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, c] : terms_)
    arr.push_back({{"w", k.w.to_json()}, {"v", k.v.to_json()}, {"xexp", k.xexp}, {"coeff", c.to_json()}});
  return arr;
}

// ---------------------------------------------------------- block sums

int min_level(int n, int m, const std::vector<std::int64_t>& e) {
  std::int64_t l = 2 * n;
  for (auto ei : e) {
    // ceil(n - ei/m)
    const std::int64_t num = static_cast<std::int64_t>(n) * m - ei;
    const std::int64_t c = num >= 0 ? (num + m - 1) / m : -((-num) / m);
    l = std::max(l, c);
  }
  return static_cast<int>(l);
}

namespace {

int wsize_of(Integrand k, int n) { return k == Integrand::Theorem ? n : n + 1; }

bool has_lambda(Integrand k) { return k == Integrand::Theorem || k == Integrand::TheoremEmbedded; }

/// The fixed right factor of the w-argument, of size wsize.
GMatrix right_factor(Integrand k, int n, std::int64_t p, int m) {
  const Rational f = rpow(p, m);
  switch (k) {
    case Integrand::Theorem:
      return special_matrix(SpecialKind::D, n, f, p) * special_matrix(SpecialKind::w, n, f, p);
    case Integrand::TheoremEmbedded:
      return embed(special_matrix(SpecialKind::D, n, f, p) * special_matrix(SpecialKind::w, n, f, p), n + 1);
    case Integrand::Corollary:
      return special_matrix(SpecialKind::hf, n + 1, f, p);
    case Integrand::CorollaryMid:
      return special_matrix(SpecialKind::C, n + 1, f, p) * special_matrix(SpecialKind::D, n + 1, f, p) *
             special_matrix(SpecialKind::w, n + 1, f, p);
  }
  throw std::logic_error("right_factor");
}

void check_spec(const BlockSpec& s, const MultChar& chi) {
  if (s.n < 0 || static_cast<int>(s.e.size()) != s.n || s.omega.n() != s.n)
    throw std::invalid_argument("block_sum: inconsistent sizes");
  if (chi.conductor() != s.m || s.m < 1) throw std::invalid_argument("block_sum: chi must have conductor p^m, m >= 1");
  if (s.l < min_level(s.n, s.m, s.e)) throw std::invalid_argument("block_sum: l below the admissible level");
}

// Everything a term needs that does not depend on r.
struct Kernel {
  int n, N, m, l;
  std::int64_t p;
  std::vector<std::int64_t> e;
  WeylElement omega;
  std::vector<Rational> pe;
  bool lambda;
  std::int64_t lam_den = 1;       // psi(lambda) = exp(2 pi i (lam_num mod den)/den)
  std::vector<std::int64_t> lam_w;  // weights p^{m nu} of the last row
  int sgn;
  std::vector<std::vector<std::pair<int, Rational>>> cols;  // nonzeros of the right factor by column
  const MultChar* chi;
  std::int64_t chimod;

  Kernel(const BlockSpec& s, const MultChar& c)
      : n(s.n), N(wsize_of(s.integrand, s.n)), m(s.m), l(s.l), p(c.prime()), e(s.e), omega(s.omega),
        lambda(has_lambda(s.integrand) && s.n > 0), sgn(sign_of(s.omega)), chi(&c), chimod(c.modulus()) {
    for (auto x : e) pe.push_back(rpow(p, x));
    if (lambda) {
      const std::int64_t E = e[static_cast<std::size_t>(n - 1)] - static_cast<std::int64_t>(m) * (n + 1);
      if (E < 0) lam_den = ipow(p, static_cast<int>(-E));
      for (int nu = 1; nu <= n; ++nu) lam_w.push_back(ipow(p, m * nu) % lam_den);
    }
    GMatrix R = right_factor(s.integrand, n, p, m);
    cols.resize(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        if (R(k, j) != 0) cols[static_cast<std::size_t>(j)].push_back({k, R(k, j)});
  }

  // Phase of psi(lambda(g)) chi(unit part of det g) and the w-evaluation.
  bool term(const std::int64_t* r, GMatrix& g, GMatrix& W, Phase& ph, WhittakerKey& key) const {
    const int s_last = n > 0 ? omega[n - 1] : 0;
    ph = Phase();
    if (lambda && lam_den > 1) {
      __int128 acc = 0;
      for (int nu = 0; nu < n; ++nu) acc += static_cast<__int128>(r[s_last * n + nu] % lam_den) * lam_w[static_cast<std::size_t>(nu)];
      ph = Phase::make(static_cast<std::int64_t>(acc % lam_den), lam_den);
    }
    std::int64_t d = sgn;
    for (int i = 0; i < n; ++i) d = mulmod(d, r[i * n + i], chimod);
    ph = ph + Phase::make(chi->exponent(posmod(d, chimod)), chi->level());
    // g = varpi^e omega r, embedded in size N
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::int64_t x = r[omega[i] * n + j];
        if (x == 0) g(i, j) = 0;
        else g(i, j) = pe[static_cast<std::size_t>(i)] * Rational(static_cast<long>(x));
      }
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Rational& out = W(i, j);
        out = 0;
        for (const auto& [k, c] : cols[static_cast<std::size_t>(j)]) {
          if (i < n && k < n) {
            if (g(i, k) != 0) out += g(i, k) * c;
          } else if (i == k) {
            out += c;
          }
        }
      }
    FormalPhase fp = formal_eval_phase(W, 1);
    if (fp.zero) return false;
    ph = ph + fp.phase;
    key = std::move(fp.key);
    return true;
  }
};

PairingValue finish_block(const BlockSpec& s, const MultChar& chi, const std::map<WhittakerKey, RootSum>& acc) {
  PairingValue out;
  const std::int64_t se = sum_e(s.e);
  const CyclotomicNumber chip = chi.value_at_p().pow(se);
  const WhittakerKey vkey{s.e, s.omega};
  for (const auto& [k, rs] : acc) out.add({k, vkey, se}, rs.value() * chip);
  return out;
}

}  // namespace

PairingValue block_sum(const BlockSpec& spec, const MultChar& chi, int threads) {
  check_spec(spec, chi);
  if (!supported(spec.e, spec.omega)) return {};
  const RepSet reps(spec.n, spec.l, spec.m, chi.prime(), spec.omega);
  const Kernel K(spec, chi);
  const long long total = static_cast<long long>(reps.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<std::map<WhittakerKey, RootSum>> partial(static_cast<std::size_t>(nthreads));
#pragma omp parallel num_threads(nthreads)
  {
    auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
    std::vector<std::int64_t> r(static_cast<std::size_t>(spec.n * spec.n));
    GMatrix g(spec.n, chi.prime()), W(K.N, chi.prime());
    Phase ph;
    WhittakerKey key;
#pragma omp for schedule(dynamic, 256)
    for (long long idx = 0; idx < total; ++idx) {
      reps.decode(static_cast<std::uint64_t>(idx), r.data());
      if (K.term(r.data(), g, W, ph, key)) acc[key].add(ph);
    }
  }
  std::map<WhittakerKey, RootSum> all;
  for (auto& part : partial)
    for (auto& [k, rs] : part) all[k].merge(rs);
  return finish_block(spec, chi, all);
}

PairingValue block_sum_reference(const BlockSpec& spec, const MultChar& chi) {
  check_spec(spec, chi);
  const int n = spec.n;
  const std::int64_t p = chi.prime();
  const Rational f = rpow(p, spec.m);
  const RepSet reps(n, spec.l, spec.m, p, spec.omega);
  const GMatrix base = varpi_power(spec.e, p) * spec.omega.matrix(p);
  PairingValue out;
  for (std::uint64_t idx = 0; idx < reps.size(); ++idx) {
    const GMatrix g = base * reps.matrix(idx);
    GMatrix warg;
    switch (spec.integrand) {
      case Integrand::Theorem:
        warg = g * special_matrix(SpecialKind::D, n, f, p) * special_matrix(SpecialKind::w, n, f, p);
        break;
      case Integrand::TheoremEmbedded:
        warg = embed(g * special_matrix(SpecialKind::D, n, f, p) * special_matrix(SpecialKind::w, n, f, p), n + 1);
        break;
      case Integrand::Corollary:
        warg = embed(g, n + 1) * special_matrix(SpecialKind::hf, n + 1, f, p);
        break;
      case Integrand::CorollaryMid:
        warg = embed(g, n + 1) * special_matrix(SpecialKind::C, n + 1, f, p) *
               special_matrix(SpecialKind::D, n + 1, f, p) * special_matrix(SpecialKind::w, n + 1, f, p);
        break;
    }
    const FormalValue W = formal_eval(warg, 1);
    const FormalValue V = formal_eval(g, -1);
    if (W.coeff.is_zero() || V.coeff.is_zero()) continue;
    const Rational det = g.det();
    CyclotomicNumber c = W.coeff * V.coeff * chi.value(det);
    if (has_lambda(spec.integrand)) c *= psi_eval(lambda_n(g, f), p);
    out.add({W.key, V.key, valuation(det, p)}, c);
  }
  return out;
}

// ------------------------------------------------------- closed forms

namespace {

PairingKey unit_key(int wsize, int n) {
  return {WhittakerKey::identity(wsize), WhittakerKey::identity(n), 0};
}

}  // namespace

PairingValue lemma_closed_form(int n, int m, int l, const MultChar& chi, int wsize) {
  if (wsize < 0) wsize = n;
  const std::int64_t p = chi.prime();
  std::int64_t ex2 = static_cast<std::int64_t>(l - 2 * n) * n * (n + 1);
  for (int nu = 1; nu <= n; ++nu) ex2 += 5 * nu * nu - 3 * nu;
  // ex2 is always even
  const Rational nf = rpow(p, static_cast<std::int64_t>(m) * (ex2 / 2));
  PairingValue out;
  out.add(unit_key(wsize, n), CyclotomicNumber(nf) * gauss_sum(chi).pow(n * (n + 1) / 2));
  return out;
}

PairingValue theorem_rhs(int n, int m, const MultChar& chi, int wsize) {
  if (wsize < 0) wsize = n;
  const std::int64_t p = chi.prime();
  Rational c = 1;
  for (int nu = 1; nu <= n; ++nu) c /= Rational(1) - rpow(p, -nu);
  std::int64_t ex = 0;
  for (int k = 1; k <= n; ++k) ex += k * (n + 1 - k);
  c *= rpow(p, -static_cast<std::int64_t>(m) * ex);
  PairingValue out;
  out.add(unit_key(wsize, n), CyclotomicNumber(c) * gauss_sum(chi).pow(n * (n + 1) / 2));
  return out;
}

// ------------------------------------------------------ theorem checks

namespace {

const char* integrand_name(Integrand k) {
  switch (k) {
    case Integrand::Theorem:
      return "theorem";
    case Integrand::TheoremEmbedded:
      return "theorem_embedded";
    case Integrand::Corollary:
      return "corollary";
    case Integrand::CorollaryMid:
      return "corollary_mid";
  }
  return "?";
}

template <class F>
void for_window(int n, int radius, F&& fn) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(n), -radius);
  for (;;) {
    fn(e);
    int i = 0;
    while (i < n && e[static_cast<std::size_t>(i)] == radius) e[static_cast<std::size_t>(i++)] = -radius;
    if (i == n) break;
    ++e[static_cast<std::size_t>(i)];
  }
}

TheoremReport run_check(int n, const MultChar& chi, int radius, int l_min, int threads, Integrand kind) {
  const int m = chi.conductor();
  const std::int64_t p = chi.prime();
  const int wsize = wsize_of(kind, n);
  TheoremReport rep;
  rep.n = n;
  rep.m = m;
  rep.p = p;
  rep.radius = radius;
  rep.integrand = kind;
  const auto weyl = WeylElement::all(n);
  for_window(n, radius, [&](const std::vector<std::int64_t>& e) {
    for (const auto& w : weyl) {
      BlockReport b;
      b.e = e;
      b.omega = w;
      b.l = std::max(min_level(n, m, e), l_min);
      b.supported = supported(e, w);
      b.volume = volume(n, b.l, m, p, e);
      if (b.supported) b.value = block_sum({n, m, b.l, e, w, kind}, chi, threads);
      const bool central = w.is_identity() && std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
      if (central) {
        // the closed form only speaks about the theorem-shaped integrand
        if (kind == Integrand::Theorem) b.ok = b.value == lemma_closed_form(n, m, b.l, chi, wsize);
      } else {
        b.ok = b.value.is_zero();
      }
      if (!b.ok && rep.witness.empty()) rep.witness = WhittakerKey{e, w}.to_string();
      rep.blocks_ok = rep.blocks_ok && b.ok;
      rep.lhs += b.value.scaled(CyclotomicNumber(b.volume));
      rep.blocks.push_back(std::move(b));
    }
  });
  rep.rhs = theorem_rhs(n, m, chi, wsize);
  rep.pass = rep.blocks_ok && rep.lhs == rep.rhs;
  if (rep.pass) rep.witness.clear();
  else if (rep.witness.empty()) rep.witness = "total";
  return rep;
}

}  // namespace

TheoremReport theorem_check(int n, const MultChar& chi, int radius, int l_min, int threads) {
  return run_check(n, chi, radius, l_min, threads, Integrand::Theorem);
}

TheoremReport corollary_check(int n, const MultChar& chi, int radius, int l_min, int threads) {
  return run_check(n, chi, radius, l_min, threads, Integrand::Corollary);
}

std::vector<ChainReport> corollary_chain_check(int n, const MultChar& chi, int radius, int l_min, int threads) {
  const int m = chi.conductor();
  const Rational f = rpow(chi.prime(), m);
  const CyclotomicNumber chib = chi.value(special_matrix(SpecialKind::B, n, f, chi.prime()).det());
  std::vector<ChainReport> out;
  for_window(n, radius, [&](const std::vector<std::int64_t>& e) {
    for (const auto& w : WeylElement::all(n)) {
      if (!supported(e, w)) continue;
      const int l = std::max(min_level(n, m, e), l_min);
      const auto cor = block_sum({n, m, l, e, w, Integrand::Corollary}, chi, threads);
      const auto mid = block_sum({n, m, l, e, w, Integrand::CorollaryMid}, chi, threads);
      const auto emb = block_sum({n, m, l, e, w, Integrand::TheoremEmbedded}, chi, threads);
      out.push_back({e, w, cor == mid.scaled(chib), cor == emb});
    }
  });
  return out;
}

nlohmann::json TheoremReport::to_json() const {
  nlohmann::json blocks_j = nlohmann::json::array();
  for (const auto& b : blocks) {
    std::vector<int> s;
    for (int x : b.omega.sigma()) s.push_back(x + 1);
    blocks_j.push_back({{"e", b.e},
                        {"sigma", s},
                        {"l", b.l},
                        {"supported", b.supported},
                        {"volume", lbirch::to_string(b.volume)},
                        {"zero", b.value.is_zero()},
                        {"ok", b.ok}});
  }
  return {{"n", n},
          {"p", p},
          {"m", m},
          {"integrand", integrand_name(integrand)},
          {"window_radius", radius},
          {"level_rule", "l_e = max(l_min, 2n, ceil(n - e_i/m))"},
          {"blocks", blocks_j},
          {"lhs", lhs.to_json()},
          {"rhs", rhs.to_json()},
          {"blocks_ok", blocks_ok},
          {"pass", pass},
          {"witness", witness}};
}

// ------------------------------------------------------------ Z(r)

namespace {

std::map<WhittakerKey, RootSum> zeta_terms_brute(const ZContext& ctx, const MultChar& chi,
                                                 const std::vector<std::int64_t>& r) {
  const std::int64_t p = chi.prime();
  const BlockSpec spec{ctx.n, ctx.m, ctx.l, ctx.e, ctx.omega, Integrand::Theorem};
  const Kernel K(spec, chi);
  const std::int64_t M = ipow(p, ctx.m * ctx.l);
  const std::int64_t units = M / p * (p - 1);
  std::uint64_t total = 1;
  for (int i = 0; i < ctx.n; ++i) total *= static_cast<std::uint64_t>(units);
  std::map<WhittakerKey, RootSum> acc;
  GMatrix g(ctx.n, p), W(ctx.n, p);
  Phase ph;
  WhittakerKey key;
  std::vector<std::int64_t> gamma(static_cast<std::size_t>(ctx.n));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (int i = 0; i < ctx.n; ++i) {
      gamma[static_cast<std::size_t>(i)] = kth_unit(static_cast<std::int64_t>(t % static_cast<std::uint64_t>(units)), p);
      t /= static_cast<std::uint64_t>(units);
    }
    auto s = torus_act(r, gamma, p, ctx.m, ctx.l);
    if (K.term(s.data(), g, W, ph, key)) acc[key].add(ph);
  }
  return acc;
}

}  // namespace

PairingValue zeta_brute(const ZContext& ctx, const MultChar& chi, const std::vector<std::int64_t>& r) {
  if (!supported(ctx.e, ctx.omega)) return {};
  const BlockSpec spec{ctx.n, ctx.m, ctx.l, ctx.e, ctx.omega, Integrand::Theorem};
  return finish_block(spec, chi, zeta_terms_brute(ctx, chi, r));
}

namespace {

// prod_nu sum_{gamma mod f^l unit} chi(gamma) psi(p^{e_n} f^{nu-n-1} r_{sigma(n) nu} gamma)
RootSum gauss_product_factor(const ZContext& ctx, const MultChar& chi, const std::vector<std::int64_t>& r, int nu) {
  const std::int64_t p = chi.prime();
  const int n = ctx.n;
  const std::int64_t M = ipow(p, ctx.m * ctx.l);
  const std::int64_t x = r[static_cast<std::size_t>(ctx.omega[n - 1] * n + nu)];
  const std::int64_t E = ctx.e[static_cast<std::size_t>(n - 1)] + static_cast<std::int64_t>(ctx.m) * (nu - n);
  RootSum s;
  for (std::int64_t g = 1; g < M; ++g) {
    if (g % p == 0) continue;
    Phase ph = Phase::make(chi.exponent(g % chi.modulus()), chi.level());
    if (x != 0 && E < 0) {
      const std::int64_t D = ipow(p, static_cast<int>(-E));
      ph = ph + Phase::make(mulmod(x, g, D), D);
    }
    s.add(ph);
  }
  return s;
}

}  // namespace

PairingValue zeta_factored(const ZContext& ctx, const MultChar& chi, const std::vector<std::int64_t>& r) {
  if (!supported(ctx.e, ctx.omega)) return {};
  const std::int64_t p = chi.prime();
  const int n = ctx.n;
  const Rational f = rpow(p, ctx.m);
  const GMatrix g = varpi_power(ctx.e, p) * ctx.omega.matrix(p) * int_matrix(n, p, r.data());
  const FormalValue W =
      formal_eval(g * special_matrix(SpecialKind::D, n, f, p) * special_matrix(SpecialKind::w, n, f, p), 1);
  if (W.coeff.is_zero()) return {};
  // chi(varpi^e omega) chi(r) = chi(det g)
  CyclotomicNumber c = W.coeff * chi.value(g.det());
  for (int nu = 0; nu < n; ++nu) {
    c *= gauss_product_factor(ctx, chi, r, nu).value();
    if (c.is_zero()) return {};
  }
  PairingValue out;
  out.add({W.key, WhittakerKey{ctx.e, ctx.omega}, sum_e(ctx.e)}, c);
  return out;
}

bool w_torus_invariant(const ZContext& ctx, const std::vector<std::int64_t>& r, const std::vector<std::int64_t>& gamma,
                       std::int64_t p) {
  const int n = ctx.n;
  const Rational f = rpow(p, ctx.m);
  const GMatrix right = special_matrix(SpecialKind::D, n, f, p) * special_matrix(SpecialKind::w, n, f, p);
  const GMatrix left = varpi_power(ctx.e, p) * ctx.omega.matrix(p);
  const auto s = torus_act(r, gamma, p, ctx.m, ctx.l);
  const FormalValue a = formal_eval(left * int_matrix(n, p, r.data()) * right, 1);
  const FormalValue b = formal_eval(left * int_matrix(n, p, s.data()) * right, 1);
  return a.key == b.key && a.coeff == b.coeff;
}

PairingValue rtilde_orbit_sum(const ZContext& ctx, const MultChar& chi, int threads) {
  const int n = ctx.n;
  const std::int64_t p = chi.prime();
  if (n < 1 || ctx.omega[n - 1] != n - 1 || ctx.e[static_cast<std::size_t>(n - 1)] != 0)
    throw std::invalid_argument("rtilde_orbit_sum: needs sigma(n) = n and e_n = 0");
  if (!supported(ctx.e, ctx.omega)) return {};
  const RepSet reps = RepSet::rtilde_orbit_reps(n, ctx.l, ctx.m, p, ctx.omega);
  // the last row is fixed, so the Gauss-sum product is a constant
  const std::vector<std::int64_t> r0 = reps.entries(0);
  CyclotomicNumber gp = 1;
  for (int nu = 0; nu < n; ++nu) gp *= gauss_product_factor(ctx, chi, r0, nu).value();
  const BlockSpec spec{n, ctx.m, ctx.l, ctx.e, ctx.omega, Integrand::Theorem};
  Kernel K(spec, chi);
  K.lambda = false;  // replaced by the Gauss-sum product
  const long long total = static_cast<long long>(reps.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<std::map<WhittakerKey, RootSum>> partial(static_cast<std::size_t>(nthreads));
#pragma omp parallel num_threads(nthreads)
  {
    auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
    std::vector<std::int64_t> r(static_cast<std::size_t>(n * n));
    GMatrix g(n, p), W(n, p);
    Phase ph;
    WhittakerKey key;
#pragma omp for schedule(dynamic, 256)
    for (long long idx = 0; idx < total; ++idx) {
      reps.decode(static_cast<std::uint64_t>(idx), r.data());
      if (K.term(r.data(), g, W, ph, key)) acc[key].add(ph);
    }
  }
  std::map<WhittakerKey, RootSum> all;
  for (auto& part : partial)
    for (auto& [k, rs] : part) all[k].merge(rs);
  return finish_block(spec, chi, all).scaled(gp);
}

}  // namespace lbirch
