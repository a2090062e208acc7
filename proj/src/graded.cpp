#include "nchodge/graded.hpp"

namespace nchodge {

std::string to_string(DegreeShift s) {
  switch (s) {
    case DegreeShift::zero: return "0";
    case DegreeShift::plus_one: return "+1";
    case DegreeShift::minus_one: return "-1";
    case DegreeShift::odd: return "odd";
  }
  return "?";
}

double shift_violation(const GradedOperator& op, const GradedSpace& space) {
  const Mat& m = op.mat;
  double worst = 0.0;
  for (int c = 0; c < m.cols(); ++c) {
    int dc = space.degree_of(c);
    for (int r = 0; r < m.rows(); ++r) {
      int dr = space.degree_of(r);
      bool allowed = false;
      switch (op.shift) {
        case DegreeShift::zero: allowed = (dr == dc); break;
        case DegreeShift::plus_one: allowed = (dr == dc + 1); break;
        case DegreeShift::minus_one: allowed = (dr == dc - 1); break;
        case DegreeShift::odd: allowed = ((dr - dc) % 2 != 0); break;
      }
      if (!allowed) worst = std::max(worst, std::abs(m(r, c)));
    }
  }
  return worst;
}

Mat space_grading(const GradedSpace& space) {
  return kron(build_grading(space.ext), Mat::Identity(space.N0, space.N0));
}

Mat space_degree_projection(const GradedSpace& space, int k) {
  return kron(degree_projection(space.ext, k), Mat::Identity(space.N0, space.N0));
}

}  // namespace nchodge
