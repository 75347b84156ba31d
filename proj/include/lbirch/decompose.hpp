#pragma once

#include <cstdint>
#include <vector>

#include "lbirch/gmatrix.hpp"

namespace lbirch {

/// g = u * varpi^e * omega * s with u upper unipotent over Q_p and s Iwahori.
struct IwasawaData {
  GMatrix u;
  std::vector<std::int64_t> e;
  WeylElement omega;
  GMatrix s;
};

/// Full decomposition. u is reduced to a canonical representative of its
/// class modulo U(F) cap (varpi^e omega) I (varpi^e omega)^-1, so two inputs in
/// the same double coset U g I give the same (e, omega) and two inputs in the
/// same coset g I give the same u.
IwasawaData decompose(const GMatrix& g);

/// Cell data only: (e, omega) and the sum of the superdiagonal of some valid
/// u. This is what a Whittaker function evaluation needs.
struct CellData {
  std::vector<std::int64_t> e;
  WeylElement omega;
  Rational super_sum;
};

CellData decompose_cell(const GMatrix& g);

/// c_ij = e_i - e_j + [sigma(i) > sigma(j)] for i < j: u_ij may be changed by
/// anything of valuation >= c_ij without leaving u * varpi^e omega I.
std::int64_t cell_exponent(const std::vector<std::int64_t>& e, const WeylElement& w, int i, int j);

/// Reduce u to the canonical representative of u * H, H as above.
GMatrix canonicalize_unipotent(const GMatrix& u, const std::vector<std::int64_t>& e, const WeylElement& w);

/// g = b * k with b upper triangular over Q_p and k in GL_n(Z_p); b has
/// diagonal p^{e_i} and (i,j) entries reduced into [0, p^{e_i}).
struct BKData {
  GMatrix b;
  GMatrix k;
};

BKData iwasawa_bk(const GMatrix& g);

/// The canonical b of iwasawa_bk, without computing k.
GMatrix coset_canonical(const GMatrix& g);

}  // namespace lbirch
