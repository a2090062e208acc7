// Exterior algebra over n generator one-forms w_1..w_n. Basis elements are
// strictly increasing multi-indices, ordered by degree and lexicographically
// within a degree; dimension 2^n. Multi-indices are stored as bitmasks with
// bit (j-1) standing for w_j.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nchodge/lie.hpp"
#include "nchodge/linalg.hpp"

namespace nchodge {

struct WedgeResult {
  int sign = 0;  // 0 means the wedge vanished (repeated index)
  std::uint32_t mask = 0;
};

// w_j ^ w_I for sorted I: zero if j in I, otherwise sign (-1)^{#(entries < j)}
// and the sorted union.
WedgeResult wedge_insert(int j, std::uint32_t mask);
std::pair<int, std::vector<int>> wedge_insert(int j, const std::vector<int>& idx);

class ExteriorBasis {
 public:
  explicit ExteriorBasis(int n);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(masks_.size()); }
  int degree(int pos) const;
  std::uint32_t mask_at(int pos) const { return masks_[pos]; }
  int position(std::uint32_t mask) const { return pos_of_mask_[mask]; }
  std::vector<int> tuple_at(int pos) const;  // 1-based, strictly increasing

  // degree blocks are contiguous because the order is degree-major
  int degree_offset(int k) const { return offsets_[k]; }
  int degree_count(int k) const { return offsets_[k + 1] - offsets_[k]; }

  nlohmann::json to_json() const;
  static ExteriorBasis from_json(const nlohmann::json& j);

 private:
  int n_ = 0;
  std::vector<std::uint32_t> masks_;
  std::vector<int> pos_of_mask_;
  std::vector<int> offsets_;  // n+2 entries, offsets_[n+1] == dim
};

// Creation operator T_j: v -> w_j ^ v, a 2^n x 2^n matrix on the basis above.
Mat build_T(const ExteriorBasis& basis, int j);

// Combinatorial annihilation (delete w_j with the same sign rule); equals the
// conjugate transpose of T_j.
Mat build_T_adjoint(const ExteriorBasis& basis, int j);

// Bracket part of the differential on pure exterior vectors:
//   e_I -> -(1/2) sum_{k} sum_{a,b} (-1)^{k+1} c[i_k][a][b] w_a ^ w_b ^ e_{I \ i_k}
// Vanishes for abelian constants and on the top degree.
Mat build_bracket_term(const ExteriorBasis& basis, const LieAlgebra& lie);

// gamma = (-1)^degree
Mat build_grading(const ExteriorBasis& basis);
Mat degree_projection(const ExteriorBasis& basis, int k);

}  // namespace nchodge
