#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "lbirch/cyclotomic.hpp"
#include "lbirch/decompose.hpp"
#include "lbirch/symbolic.hpp"

namespace lbirch {

/// A cell U varpi^e omega I; the formal value w(varpi^e omega).
struct WhittakerKey {
  std::vector<std::int64_t> e;
  WeylElement omega;
  auto operator<=>(const WhittakerKey&) const = default;
  bool operator==(const WhittakerKey&) const = default;
  static WhittakerKey identity(int n) { return {std::vector<std::int64_t>(static_cast<std::size_t>(n), 0), WeylElement::identity(n)}; }
  std::string to_string() const;
  nlohmann::json to_json() const;
};

/// psi is trivial on U cap (varpi^e omega) I (varpi^e omega)^-1.
bool supported(const std::vector<std::int64_t>& e, const WeylElement& w);
inline bool supported(const WhittakerKey& k) { return supported(k.e, k.omega); }

/// w(g) = coeff * w(varpi^e omega) for an Iwahori-invariant psi^sign-Whittaker
/// function. coeff is 0 on unsupported cells.
struct FormalValue {
  CyclotomicNumber coeff;
  WhittakerKey key;
};

FormalValue formal_eval(const GMatrix& g, int sign);

/// The phase form of formal_eval for hot loops: psi^sign(u) as a Phase plus
/// the key; `zero` is set on unsupported cells.
struct FormalPhase {
  Phase phase;
  WhittakerKey key;
  bool zero = false;
};

FormalPhase formal_eval_phase(const GMatrix& g, int sign);

/// Sampling oracle for `supported`: decomposes varpi^e omega s for random
/// Iwahori s and checks that the unipotent part found has trivial psi.
/// Returns false as soon as a nontrivial value is seen.
bool consistency_probe(const std::vector<std::int64_t>& e, const WeylElement& w, int trials, std::int64_t p,
                       std::uint64_t seed = 1);

/// Complete homogeneous symmetric polynomial h_k(x_1..x_n).
SymbolicScalar complete_homogeneous(int n, std::int64_t p, int k);

/// Schur polynomial s_e for nonincreasing e (negative parts allowed).
SymbolicScalar schur(int n, std::int64_t p, const std::vector<std::int64_t>& e);

bool dominant(const std::vector<std::int64_t>& e);

/// Spherical Whittaker value at varpi^e with w(1) = 1:
/// qhalf^{-sum e_i (n+1-2i)} s_e(x) for dominant e, else 0.
SymbolicScalar shintani_value(int n, std::int64_t p, const std::vector<std::int64_t>& e);

/// Value of the normalized spherical psi^sign-Whittaker function at g.
SymbolicScalar spherical_eval(const GMatrix& g, int sign = 1);

}  // namespace lbirch
