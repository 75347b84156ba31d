#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lbirch/gmatrix.hpp"
#include "lbirch/symbolic.hpp"

namespace lbirch {

/// Parabolic: cosets b K_B. Spherical: cosets g K, labelled by their Iwasawa b.
enum class HeckeKind { Parabolic, Spherical };

/// Canonical representative of a right coset b K_B, b upper triangular:
/// diagonal p^{e_i}, entry (i, j) reduced modulo p^{e_i} Z_p. Since the
/// Iwasawa b of g K is unique up to K_B, the same form also labels g K.
class CosetRep {
 public:
  CosetRep() = default;
  /// Throws std::invalid_argument for non-triangular or singular input.
  static CosetRep canonicalize(const GMatrix& b);
  /// Label of g K, K = GL_n(Z_p), for any invertible g.
  static CosetRep of_gl(const GMatrix& g);
  static CosetRep label(const GMatrix& g, HeckeKind kind) {
    return kind == HeckeKind::Spherical ? of_gl(g) : canonicalize(g);
  }

  const GMatrix& matrix() const { return b_; }
  int n() const { return b_.n(); }
  std::vector<std::int64_t> exponents() const;

  friend bool operator<(const CosetRep& a, const CosetRep& b);
  friend bool operator==(const CosetRep& a, const CosetRep& b) { return a.b_ == b.b_; }
  nlohmann::json to_json() const;

 private:
  explicit CosetRep(GMatrix b) : b_(std::move(b)) {}
  GMatrix b_;
};

inline bool coeff_is_zero(const Rational& x) { return x == 0; }
inline bool coeff_is_zero(const SymbolicScalar& x) { return x.is_zero(); }
inline nlohmann::json coeff_json(const Rational& x) { return to_string(x); }
inline nlohmann::json coeff_json(const SymbolicScalar& x) { return x.to_string(); }

/// Finite formal sum of right cosets with coefficients in S (Rational or
/// SymbolicScalar).
template <class S>
class HeckeElement {
 public:
  HeckeElement() = default;
  HeckeElement(int n, std::int64_t p, HeckeKind kind = HeckeKind::Parabolic) : n_(n), p_(p), kind_(kind) {}

  static HeckeElement unit(int n, std::int64_t p, HeckeKind kind, const S& one) {
    HeckeElement h(n, p, kind);
    h.add(CosetRep::canonicalize(GMatrix::identity(n, p)), one);
    h.invariant_ = true;
    return h;
  }

  int n() const { return n_; }
  std::int64_t prime() const { return p_; }
  HeckeKind kind() const { return kind_; }
  bool left_invariant() const { return invariant_; }
  void set_left_invariant(bool v) { invariant_ = v; }
  const std::map<CosetRep, S>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(const CosetRep& r, const S& c) {
    if (coeff_is_zero(c)) return;
    auto it = terms_.find(r);
    if (it == terms_.end()) {
      terms_.emplace(r, c);
      return;
    }
    it->second += c;
    if (coeff_is_zero(it->second)) terms_.erase(it);
  }

  HeckeElement& operator+=(const HeckeElement& o) {
    check_compatible(o);
    for (const auto& [r, c] : o.terms_) add(r, c);
    invariant_ = invariant_ && o.invariant_;
    return *this;
  }
  HeckeElement& operator-=(const HeckeElement& o) {
    check_compatible(o);
    for (const auto& [r, c] : o.terms_) add(r, -c);
    invariant_ = invariant_ && o.invariant_;
    return *this;
  }
  friend HeckeElement operator+(HeckeElement a, const HeckeElement& b) { return a += b; }
  friend HeckeElement operator-(HeckeElement a, const HeckeElement& b) { return a -= b; }

  HeckeElement scaled(const S& c) const {
    HeckeElement out(n_, p_, kind_);
    for (const auto& [r, a] : terms_) out.add(r, a * c);
    out.invariant_ = invariant_;
    return out;
  }

  template <class T, class F>
  HeckeElement<T> map_coeffs(F&& f) const {
    HeckeElement<T> out(n_, p_, kind_);
    for (const auto& [r, a] : terms_) out.add(r, f(a));
    out.set_left_invariant(invariant_);
    return out;
  }

  /// Same cosets read as cosets of the other kind (no decomposition).
  HeckeElement with_kind(HeckeKind k) const {
    HeckeElement out = *this;
    out.kind_ = k;
    return out;
  }

  friend bool operator==(const HeckeElement& a, const HeckeElement& b) {
    return a.n_ == b.n_ && a.p_ == b.p_ && a.kind_ == b.kind_ && a.terms_ == b.terms_;
  }

  /// Sorted list of [coefficient, upper-triangle entries].
  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [r, c] : terms_) j.push_back({{"coeff", coeff_json(c)}, {"rep", r.to_json()}});
    return j;
  }

  void check_compatible(const HeckeElement& o) const {
    if (o.n_ != n_ || o.p_ != p_ || o.kind_ != kind_) throw std::invalid_argument("HeckeElement: incompatible operands");
  }

 private:
  int n_ = 0;
  std::int64_t p_ = 2;
  HeckeKind kind_ = HeckeKind::Parabolic;
  bool invariant_ = false;
  std::map<CosetRep, S> terms_;
};

using HeckeQ = HeckeElement<Rational>;
using HeckeSym = HeckeElement<SymbolicScalar>;

/// Canonical rep of r * s for reps r, s; for both kinds this is the
/// triangular canonical form of the product.
CosetRep coset_product(const CosetRep& r, const CosetRep& s);

/// (sum a_i r_i)(sum b_j s_j) = sum a_i b_j (r_i s_j). Well defined when the
/// right factor is left invariant, so that flag is required of B.
template <class S>
HeckeElement<S> convolve(const HeckeElement<S>& A, const HeckeElement<S>& B) {
  A.check_compatible(B);
  if (!B.left_invariant()) throw std::invalid_argument("convolve: right factor is not left invariant");
  std::vector<std::pair<const CosetRep*, const S*>> left;
  left.reserve(A.size());
  for (const auto& [r, a] : A.terms()) left.emplace_back(&r, &a);
  std::vector<std::vector<std::pair<CosetRep, S>>> rows(left.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < left.size(); ++i) {
    rows[i].reserve(B.size());
    for (const auto& [s, b] : B.terms()) rows[i].emplace_back(coset_product(*left[i].first, s), *left[i].second * b);
  }
  HeckeElement<S> out(A.n(), A.prime(), A.kind());
  for (auto& row : rows)
    for (auto& [r, c] : row) out.add(r, c);
  out.set_left_invariant(A.left_invariant());
  return out;
}

template <class S>
HeckeElement<S> operator*(const HeckeElement<S>& A, const HeckeElement<S>& B) {
  return convolve(A, B);
}

/// Random element of K_B (Parabolic) or of GL_n(Z_p) (Spherical) with
/// entries of a few p-adic digits.
GMatrix random_integral(std::mt19937_64& rng, int n, std::int64_t p, HeckeKind kind);

/// sum a_i [k r_i] == sum a_i [r_i] for `trials` random k.
template <class S>
bool verify_left_invariant(const HeckeElement<S>& T, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    GMatrix k = random_integral(rng, T.n(), T.prime(), T.kind());
    HeckeElement<S> moved(T.n(), T.prime(), T.kind());
    for (const auto& [r, a] : T.terms()) moved.add(CosetRep::label(k * r.matrix(), T.kind()), a);
    if (moved.terms() != T.terms()) return false;
  }
  return true;
}

/// Right cosets of K_B diag(p^a) K_B (Parabolic) or K diag(p^a) K (Spherical),
/// each with coefficient 1, found as the orbit of diag(p^a) K_B under left
/// multiplication by topological generators of K_B resp. K. The left
/// invariance flag is set after a randomized check.
HeckeQ double_coset(int n, std::int64_t p, const std::vector<std::int64_t>& a, HeckeKind kind);

/// T_nu = K diag(1_{n-nu}, p 1_nu) K as right K-cosets.
HeckeQ t_op(int n, std::int64_t p, int nu);
/// U_i = K_B diag(1_{i-1}, p, 1_{n-i}) K_B (i is 1-based).
HeckeQ u_op(int n, std::int64_t p, int i);
/// V_nu from the coset list (p 1_nu, A; 0, 1_{n-nu}) K_B, A mod p; V_0 is the unit.
HeckeQ v_op_block(int n, std::int64_t p, int nu);
/// V_nu = p^{-nu(nu-1)/2} U_1 ... U_nu.
HeckeQ v_op_product(int n, std::int64_t p, int nu);
/// K_B diag(p 1_nu, 1_{n-nu}) K_B by orbit enumeration.
HeckeQ v_op_double(int n, std::int64_t p, int nu);
/// t_(p) = diag(p^{n-1}, ..., p, 1) and its double coset in three forms.
HeckeQ t_coset_double(int n, std::int64_t p);
HeckeQ t_coset_list(int n, std::int64_t p);  // u t K_B, u_ij mod p^{j-i}
HeckeQ t_coset_product(int n, std::int64_t p);  // V_1 ... V_{n-1}

/// Each g K in A becomes b K_B (g = b k). Reps are re-randomized as g k' to
/// confirm that the image does not depend on the choice; throws std::logic_error otherwise.
HeckeQ epsilon_embed(const HeckeQ& A, int trials = 4, std::uint64_t seed = 7);

/// sum_i a_i w(g g_i).
template <class S, class Oracle>
auto hecke_act(const HeckeElement<S>& T, Oracle&& w, const GMatrix& g) -> decltype(w(g)) {
  decltype(w(g)) acc{};
  for (const auto& [r, a] : T.terms()) {
    auto v = w(g * r.matrix());
    if constexpr (std::is_same_v<S, Rational> && std::is_same_v<decltype(v), SymbolicScalar>)
      acc += v * CyclotomicNumber(a);
    else
      acc += v * a;
  }
  return acc;
}

/// The normalized spherical psi-Whittaker function on GL_n with symbolic
/// Satake parameters, memoized on the Shintani exponent.
class SphericalOracle {
 public:
  SphericalOracle(int n, std::int64_t p) : n_(n), p_(p) {}
  SymbolicScalar operator()(const GMatrix& g);

  /// hecke_act(T, *this, g), collecting coefficients per Shintani exponent
  /// before multiplying by the Schur values.
  template <class S>
  SymbolicScalar act(const HeckeElement<S>& T, const GMatrix& g) {
    std::map<std::vector<std::int64_t>, SymbolicScalar> by_e;
    for (const auto& [r, a] : T.terms()) {
      Cell c = cell(g * r.matrix());
      if (!c.dominant) continue;
      SymbolicScalar& slot = by_e.try_emplace(c.e, n_, p_).first->second;
      if constexpr (std::is_same_v<S, Rational>)
        slot += SymbolicScalar(n_, p_, c.phase * CyclotomicNumber(a));
      else
        slot += a * c.phase;
    }
    SymbolicScalar out(n_, p_);
    for (const auto& [e, s] : by_e) out += shintani(e) * s;
    return out;
  }

 private:
  struct Cell {
    std::vector<std::int64_t> e;
    CyclotomicNumber phase;
    bool dominant = false;
  };
  Cell cell(const GMatrix& g) const;
  const SymbolicScalar& shintani(const std::vector<std::int64_t>& e);

  int n_;
  std::int64_t p_;
  std::map<std::vector<std::int64_t>, SymbolicScalar> cache_;
};

struct GritsenkoReport {
  int n = 0;
  std::int64_t p = 2;
  std::vector<bool> coefficient_ok;  // index nu = 0..n
  bool pass = false;  // all coefficients
  nlohmann::json witness;
  // Reported only: the U_i need not commute as coset sums (U_2 U_1 != U_1 U_2 for n = 2).
  bool u_commute = true;
  nlohmann::json u_commute_witness;
  nlohmann::json to_json() const;
};

/// e_nu(U_1..U_n) = p^{nu(nu-1)/2} eps(T_nu) for nu = 0..n, products taken in
/// increasing index order as in prod_{i=1}^n (X - U_i).
GritsenkoReport gritsenko_check(int n, std::int64_t p);

struct VLemmaReport {
  int n = 0;
  std::int64_t p = 2;
  std::vector<bool> constructions_agree;  // nu = 1..n: block list = product = double coset
  bool commute = true;
  bool t_coset_ok = false;  // double coset = list = product of V's
  std::int64_t t_coset_count = 0;
  bool pass = false;
  nlohmann::json to_json() const;
};

VLemmaReport v_lemma_check(int n, std::int64_t p);

/// The scalar by which A (spherical) acts on the spherical Whittaker
/// function: read off at g = 1 and confirmed at two dominant varpi^e.
/// Throws std::domain_error if the action is not by a scalar there.
SymbolicScalar satake_eigenvalue(const HeckeQ& A, std::uint64_t seed = 11);

struct SatakeReport {
  int n = 0;
  std::int64_t p = 2;
  std::vector<SymbolicScalar> t_values;  // nu = 0..n
  bool t_values_expected = false;        // qhalf^{nu(n-nu)} sigma_nu(x)
  bool morphism = false;                 // S(T_a T_b) = S(T_a) S(T_b)
  bool symmetric = false;
  /// With the alternative display p^{nu(nu+1)/2} sigma_nu(X): exponent of
  /// qhalf relating the two, per nu, and whether a uniform X_i = qhalf^a x_i exists.
  std::vector<std::int64_t> display_qhalf_offset;
  bool uniform_rescaling = false;
  std::int64_t uniform_rescaling_exponent = 0;
  bool pass = false;
  nlohmann::json to_json() const;
};

SatakeReport satake_check(int n, std::int64_t p);

/// psi_lambda = prod_{i<n} prod_{j != i} (lambda_i p^{1-j} V_{j-1} - V_j);
/// lambdas has n-1 entries.
HeckeSym modification_operator(int n, std::int64_t p, const std::vector<SymbolicScalar>& lambdas);

/// Evaluation keys: supported (e, omega) with |e_i| <= radius.
std::vector<std::pair<std::vector<std::int64_t>, WeylElement>> eigen_keys(int n, int radius);

struct EigenReport {
  int n = 0;
  std::int64_t p = 2;
  std::size_t keys = 0;
  std::size_t operator_size = 0;
  std::vector<bool> eigen_ok;   // nu = 1..n-1
  bool nonvanishing = false;    // psi_lambda w is nonzero at some key
  bool v_product_ok = false;    // V_1...V_{n-1} acts by kappa-hat
  bool pass = false;
  std::string scope;            // stated certification scope
  nlohmann::json to_json() const;
};

/// Symbolic eigen-check with lambda_i = qhalf^{n-1} x_i on the spherical w.
EigenReport modification_eigen_check(int n, std::int64_t p, int radius = 1);

/// u * p^exp with u a p-adic unit in Q and exp rational (half-integers allowed).
struct PPower {
  Rational unit = 1;
  Rational exp = 0;
  static PPower of(const Rational& x, std::int64_t p);
  PPower operator*(const PPower& o) const { return {unit * o.unit, exp + o.exp}; }
  PPower pow(std::int64_t k) const;
  PPower inverse() const;
  bool operator==(const PPower&) const = default;
  /// Exact value when exp is an integer.
  Rational value(std::int64_t p) const;
  nlohmann::json to_json() const;
};

struct KappaReport {
  bool ordinary = false;
  std::vector<int> order;  // roots[order[i]] has valuation i (i < n-1)
  PPower kappa;
  PPower kappa_hat;
  bool kappa_hat_unit = false;
  nlohmann::json to_json() const;
};

/// Ordinarity (val lambda_i = i-1 for i <= n-1 after reordering), kappa and
/// kappa-hat. Roots beyond the first n-1 are ignored in kappa.
KappaReport ordinarity_and_kappa(int n, std::int64_t p, const std::vector<PPower>& roots);

}  // namespace lbirch
