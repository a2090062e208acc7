// Graded coordinate space H = H_0 (x) Lambda g*. Global index order is
// degree-major (inherited from the exterior basis), multi-index-major within a
// degree: index = exterior_position * N0 + algebra_index. Degree blocks are
// contiguous.
#pragma once

#include <string>

#include "nchodge/exterior.hpp"
#include "nchodge/linalg.hpp"

namespace nchodge {

struct GradedSpace {
  ExteriorBasis ext;
  int N0;

  GradedSpace(int n, int algebra_dim) : ext(n), N0(algebra_dim) {}

  int n() const { return ext.n(); }
  int total_dim() const { return ext.dim() * N0; }
  int degree_offset(int k) const { return ext.degree_offset(k) * N0; }
  int degree_dim(int k) const { return ext.degree_count(k) * N0; }
  int index(int ext_pos, int alg_idx) const { return ext_pos * N0 + alg_idx; }
  int degree_of(int idx) const { return ext.degree(idx / N0); }
};

enum class DegreeShift { zero, plus_one, minus_one, odd };

std::string to_string(DegreeShift s);

struct GradedOperator {
  Mat mat;
  DegreeShift shift = DegreeShift::zero;
  bool hermitian = false;
  std::string provenance;
};

// Largest |entry| outside the blocks allowed by the declared degree shift.
double shift_violation(const GradedOperator& op, const GradedSpace& space);

// Full-space grading (-1)^degree and degree projections.
Mat space_grading(const GradedSpace& space);
Mat space_degree_projection(const GradedSpace& space, int k);

}  // namespace nchodge
