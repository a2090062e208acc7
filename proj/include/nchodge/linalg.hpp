// Shared dense linear-algebra helpers. All Hilbert-space coordinates in this
// project refer to orthonormal bases, so matrix adjoints are Hermitian
// conjugates and the operator norm is the largest singular value.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace nchodge {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::RowVectorXcd;
using RealVec = Eigen::VectorXd;

Mat kron(const Mat& a, const Mat& b);

// Largest singular value, computed as sqrt(lambda_max(X^H X)) with a Hermitian
// eigensolve. Deterministic and reuses the same solver the spectral module is
// audited with.
double operator_norm(const Mat& x);

inline double max_abs(const Mat& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

inline double hermitian_residual(const Mat& x) {
  return max_abs(Mat(x - x.adjoint()));
}

// FNV-1a, used for content-addressed run directories and config echo hashes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Shortest-width printf %.17g rendering; round-trips IEEE doubles exactly.
std::string format_g17(double v);

}  // namespace nchodge
