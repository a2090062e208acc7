#include "nchodge/linalg.hpp"

#include <cstdio>

#include <unsupported/Eigen/KroneckerProduct>

namespace nchodge {

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b); }

double operator_norm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  Mat gram = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace nchodge
