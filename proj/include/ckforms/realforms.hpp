#pragma once

// Matrix realizations of the real forms so(p,q), su(p,q), sp(p,q) and the
// split real form of G2, with an adapted maximal split abelian subspace.

#include "ckforms/liealg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ckf {

class ParseError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Family { SO, SU, SP, G2 };

struct RealFormSpec {
  Family family = Family::SO;
  int p = 0;
  int q = 0;

  std::string name() const;
  std::size_t dim() const;
  std::size_t real_rank() const { return family == Family::G2 ? 2 : static_cast<std::size_t>(std::min(p, q)); }
  /// Dimension of the base field over R: 1, 2 or 4 (7 for the octonion form).
  std::size_t field_dim() const;
  /// Size of the real matrices of the realization.
  std::size_t matrix_size() const;
  /// Restricted root system, e.g. "B2", "D4", "BC1", "C2", "G2"; empty when compact.
  std::string root_type() const;
  bool operator==(const RealFormSpec&) const = default;
};

/// Parses "so(3,4)", "su(2,4)", "sp(1,2)" or "g2(2)"; whitespace is ignored.
/// The result is normalized to p <= q.
RealFormSpec parse_real_form(std::string_view text);

/// Builds the realization. Basis order is the compact part (theta = +1)
/// followed by the noncompact part, and the split metadata lists A_1..A_r.
/// Classical forms act on a real space of dimension field_dim * (p + q) with
/// indefinite form diag(+1 (p blocks), -1 (q blocks)); G2 acts on the split
/// imaginary octonions with form (+,+,+,-,-,-,-).
LieAlgebra build_real_form(const RealFormSpec& spec);

/// Real index of coordinate c, component r under the per-entry realification.
inline std::size_t real_index(const RealFormSpec& s, std::size_t c, std::size_t r) { return s.field_dim() * c + r; }

/// Left multiplication by the unit u (0 = 1, 1 = i, 2 = j, 3 = k) on R^d, d = 2 or 4.
RationalMatrix unit_matrix(std::size_t d, int u);

/// Multiplication table of the split octonions in the basis (1, i, j, k, l, il, jl, kl):
/// result[a][b] is the product e_a e_b as a coordinate vector.
std::vector<std::vector<RationalVector>> split_octonion_table();

/// Generators of a real Clifford algebra for the form with p positive and q
/// negative squares, as signed permutation matrices on R^(2^k). The spinor
/// basis is ordered so that the invariant diagonal form has its positive
/// entries first, and for p <= q the grading boosts gamma_i gamma_{p+i} swap
/// positive slot i with negative slot r+i.
struct CliffordData {
  int p = 0;
  int q = 0;
  int k = 0;
  bool flipped = false;               // true when gamma_i^2 = -eta_i
  std::string form_string;            // I/Z Pauli label of the spinor form
  std::vector<std::string> labels;    // Pauli labels, p positive generators then q negative
  std::vector<SparseMatrix> gammas;   // in the reordered spinor basis
  std::vector<int> squares;           // gamma_i^2 = squares[i] * Id
  RationalMatrix spinor_form;         // diagonal, invariant under the even part
  std::size_t form_positive = 0;
  std::size_t form_negative = 0;
};

CliffordData clifford_generators(int p, int q, int max_k = 6);

}  // namespace ckf
