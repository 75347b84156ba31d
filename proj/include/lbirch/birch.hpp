#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "lbirch/characters.hpp"
#include "lbirch/cyclotomic.hpp"
#include "lbirch/gmatrix.hpp"
#include "lbirch/whittaker.hpp"

namespace lbirch {

/// Representative in R_l of the class x mod p^{ml}: values in [0, p^{ml}),
/// except that the class of -f^k (k < l) is represented by -p^{mk} itself.
std::int64_t rl_rep(std::int64_t x, std::int64_t p, int m, int l);

/// The k-th integer >= 1 prime to p (k = 0 gives 1).
inline std::int64_t kth_unit(std::int64_t k, std::int64_t p) { return k + k / (p - 1) + 1; }

/// Lazily decoded set of integer matrices with entries in R_l. Each position
/// has a slot type; an index in [0, size()) is decoded in mixed radix, so
/// ranges of indices can be split across threads.
class RepSet {
 public:
  enum class Slot { Zero, Unit, Ideal, Free, Fixed };
  struct Position {
    Slot slot = Slot::Zero;
    int unit_exp = 0;         // Unit: units mod p^unit_exp
    std::int64_t value = 0;   // Fixed
  };

  /// R_{l,n}^omega. Throws std::invalid_argument for l < 2n.
  RepSet(int n, int l, int m, std::int64_t p, WeylElement omega);

  /// R~_{l,n}^omega: last row fixed to (f^{n-1}, -f^{n-2}, ..., -1). Needs sigma(n) = n.
  static RepSet rtilde(int n, int l, int m, std::int64_t p, const WeylElement& omega);

  /// One element from each orbit of the stabiliser of the last row of R~
  /// (the group prod_nu (1 + f^{l-n+nu})): diagonal entry nu only runs over
  /// units mod p^{m(l-n+nu)}.
  static RepSet rtilde_orbit_reps(int n, int l, int m, std::int64_t p, const WeylElement& omega);

  int n() const { return n_; }
  int l() const { return l_; }
  int m() const { return m_; }
  std::int64_t prime() const { return p_; }
  std::int64_t modulus() const { return mod_; }
  const WeylElement& omega() const { return omega_; }
  const Position& position(int i, int j) const { return pos_[static_cast<std::size_t>(i * n_ + j)]; }

  std::uint64_t size() const { return size_; }

  /// Row-major entries of member idx into out[0 .. n*n).
  void decode(std::uint64_t idx, std::int64_t* out) const;
  std::vector<std::int64_t> entries(std::uint64_t idx) const;
  GMatrix matrix(std::uint64_t idx) const;

  bool contains(const std::int64_t* entries) const;
  bool contains(const GMatrix& r) const;

 private:
  RepSet() = default;
  void finish();

  int n_ = 0, l_ = 0, m_ = 0;
  std::int64_t p_ = 2, mod_ = 1;
  WeylElement omega_;
  std::vector<Position> pos_;
  std::vector<int> free_;                // positions that consume a digit
  std::vector<std::uint64_t> radix_;
  std::uint64_t size_ = 1;
};

RepSet enumerate_reps(int n, int l, int m, std::int64_t p, const WeylElement& omega);

GMatrix int_matrix(int n, std::int64_t p, const std::int64_t* entries);

/// (e, omega, r) with g in U(F) varpi^e omega r J_{l,n} and r in R_{l,n}^omega.
struct DoubleRep {
  std::vector<std::int64_t> e;
  WeylElement omega;
  GMatrix r;
};

DoubleRep canonical_double_rep(const GMatrix& g, int l, int m);

/// Quotient measure of U(F) \ U(F) varpi^e omega r J_{l,n}, with U(Z_p) and
/// GL_n(Z_p) of measure 1. Independent of omega and r.
Rational volume(int n, int l, int m, std::int64_t p, const std::vector<std::int64_t>& e = {});

/// vol(U(Z_p) J) = #U_n(Z/p^{ml}) / #GL_n(Z/p^{ml}), both counted by enumerating
/// all matrices mod p^{ml}.
Rational volume_by_counting(int n, int l, int m, std::int64_t p);

struct OrbitCount {
  std::int64_t count = 0;
  std::int64_t expected = 0;
  bool faithful = true;
  bool pass = false;
};

/// Size of (T-orbit of r) cap R~. Membership in R~ only constrains the last
/// row, which column nu of r * diag(gamma) sees only through gamma_nu, so
/// the orbit intersection is a product over columns of per-column sets.
OrbitCount orbit_count_check(int n, int l, int m, std::int64_t p, const WeylElement& omega,
                             const std::vector<std::int64_t>& r);

/// Same count by walking the whole finite torus (small cases only).
std::int64_t orbit_count_full_walk(int n, int l, int m, std::int64_t p, const WeylElement& omega,
                                   const std::vector<std::int64_t>& r);

struct BijectionReport {
  std::uint64_t size_tilde = 0;
  std::uint64_t size_lower = 0;
  std::uint64_t checked_tilde = 0;
  std::uint64_t checked_lower = 0;
  bool pass = false;
};

/// p: R~_{l,n}^omega -> R_{l,n-1}^{p(omega)} and g -> j~(g) C_n are inverse.
/// Sets of size above max_enum are sampled (samples elements each side).
BijectionReport rtilde_bijection_check(int n, int l, int m, std::int64_t p, const WeylElement& omega,
                                       std::uint64_t max_enum = 100000000, std::uint64_t samples = 20000,
                                       std::uint64_t seed = 1);

/// A key of the formal pairing: w-cell, v-cell and the power of X.
struct PairingKey {
  WhittakerKey w;
  WhittakerKey v;
  std::int64_t xexp = 0;
  auto operator<=>(const PairingKey&) const = default;
  bool operator==(const PairingKey&) const = default;
};

/// Finite formal sum of c * w(cell) (x) v(cell) * X^k. Zero coefficients are dropped.
class PairingValue {
 public:
  void add(const PairingKey& k, const CyclotomicNumber& c);
  PairingValue& operator+=(const PairingValue& o);
  PairingValue scaled(const CyclotomicNumber& c) const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<PairingKey, CyclotomicNumber>& terms() const { return terms_; }
  friend bool operator==(const PairingValue& a, const PairingValue& b) { return a.terms_ == b.terms_; }
  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  std::map<PairingKey, CyclotomicNumber> terms_;
};

/// Which integrand a block sums.
enum class Integrand {
  Theorem,          // psi(lambda_n(g)) w(g D_n w_n), w on GL_n
  TheoremEmbedded,  // psi(lambda_n(g)) w(j(g D_n w_n)), w on GL_{n+1}
  Corollary,        // w(j(g) h^(f)), w on GL_{n+1}
  CorollaryMid      // w(j(g) C_{n+1} D_{n+1} w_{n+1}), w on GL_{n+1}
};

struct BlockSpec {
  int n = 1;
  int m = 1;  // conductor exponent, f = p^m
  int l = 2;
  std::vector<std::int64_t> e;
  WeylElement omega;
  Integrand integrand = Integrand::Theorem;
};

/// Smallest admissible l: max(2n, ceil(n - e_i/m)).
int min_level(int n, int m, const std::vector<std::int64_t>& e);

/// Sum over g in varpi^e omega R_{l,n}^omega of the integrand times v(g)
/// chi(det g) X^{sum e}, without the volume factor. w and v are expanded
/// through formal_eval with signs +1 and -1. OpenMP over the representative
/// index range; threads <= 0 uses the OpenMP default.
PairingValue block_sum(const BlockSpec& spec, const MultChar& chi, int threads = 1);

/// Term-by-term evaluation with full matrices and cyclotomic products. Kept
/// as the oracle for block_sum.
PairingValue block_sum_reference(const BlockSpec& spec, const MultChar& chi);

/// The closed form of the block for (e, omega) = (0, id):
/// N(f)^{(l-2n)n(n+1)/2 + (1/2) sum (5nu^2 - 3nu)} G^{n(n+1)/2} [w(1) (x) v(1)].
PairingValue lemma_closed_form(int n, int m, int l, const MultChar& chi, int wsize = -1);

/// prod (1 - p^-nu)^-1 N(f)^{-sum k(n+1-k)} G^{n(n+1)/2} [w(1) (x) v(1)].
PairingValue theorem_rhs(int n, int m, const MultChar& chi, int wsize = -1);

struct BlockReport {
  std::vector<std::int64_t> e;
  WeylElement omega;
  int l = 0;
  bool supported = true;
  Rational volume;
  PairingValue value;  // without volume
  bool ok = true;      // zero off (0, id); closed form at (0, id)
};

struct TheoremReport {
  int n = 0, m = 0;
  std::int64_t p = 2;
  int radius = 0;
  Integrand integrand = Integrand::Theorem;
  std::vector<BlockReport> blocks;
  PairingValue lhs;
  PairingValue rhs;
  bool blocks_ok = true;
  bool pass = false;
  std::string witness;
  nlohmann::json to_json() const;
};

/// Theorem: all blocks in [-radius, radius]^n x W_n, each at its own minimal
/// level (at least l_min); blockwise vanishing and total = RHS.
TheoremReport theorem_check(int n, const MultChar& chi, int radius, int l_min = -1, int threads = 1);

/// Corollary with w on GL_{n+1}: total over the same window = RHS with
/// w(1_{n+1}). Blockwise vanishing is asserted too, since g -> g B_n keeps
/// every cell.
TheoremReport corollary_check(int n, const MultChar& chi, int radius, int l_min = -1, int threads = 1);

struct ChainReport {
  std::vector<std::int64_t> e;
  WeylElement omega;
  bool mid_ok = false;       // corollary block = chi(det B_n) * mid block
  bool embedded_ok = false;  // corollary block = embedded theorem block
};

/// Per-block check of the substitution chain behind the corollary.
std::vector<ChainReport> corollary_chain_check(int n, const MultChar& chi, int radius, int l_min = -1,
                                               int threads = 1);

/// Context of the partial sums Z(r) over torus orbits.
struct ZContext {
  int n = 1, m = 1, l = 2;
  std::vector<std::int64_t> e;
  WeylElement omega;
};

/// Z(r) by direct summation over the finite torus (T/(1+f^l))^n.
PairingValue zeta_brute(const ZContext& ctx, const MultChar& chi, const std::vector<std::int64_t>& r);

/// Z(r) through the factorisation X^{sum e} chi(varpi^e omega) w(varpi^e omega r D w)
/// v(varpi^e omega) chi(r) prod_nu S_nu, each S_nu a direct one-variable sum.
PairingValue zeta_factored(const ZContext& ctx, const MultChar& chi, const std::vector<std::int64_t>& r);

/// The representative of r * diag(gamma) in R_l.
std::vector<std::int64_t> torus_act(const std::vector<std::int64_t>& r, const std::vector<std::int64_t>& gamma,
                                    std::int64_t p, int m, int l);

/// w(varpi^e omega r' D w) for r' = r diag(gamma) equals w(varpi^e omega r D w) formally.
bool w_torus_invariant(const ZContext& ctx, const std::vector<std::int64_t>& r, const std::vector<std::int64_t>& gamma,
                       std::int64_t p);

/// Sum of Z over one representative of each orbit in R~ (which equals the
/// block sum by the orbit count): needs sigma(n) = n and e_n = 0.
PairingValue rtilde_orbit_sum(const ZContext& ctx, const MultChar& chi, int threads = 1);

}  // namespace lbirch
