// Spectral analysis of the graded operators: kernel detection with an explicit
// threshold policy, the orthogonal splitting H = ker D (+) ran d (+) ran d^H,
// the Euler characteristic through independent routes, heat-trace power-law
// fits, and spectral-dimension estimates from eigenvalue decay.
#pragma once

#include <limits>
#include <vector>

#include "nchodge/graded.hpp"
#include "nchodge/linalg.hpp"

namespace nchodge {

// t-values log-uniform on [lo, hi], points_per_decade samples per decade.
RealVec geometric_grid(double lo, double hi, int points_per_decade);

struct EigResult {
  RealVec eigenvalues;    // ascending
  Mat eigenvectors;       // empty when with_vectors = false
  double residual = 0.0;  // max|A V - V diag| / max(1, max|A|)
};

EigResult hermitian_eigendecompose(const Mat& a, bool with_vectors = true);

// Contract-checked entry point: rejects operators without the hermitian flag
// or with ||op - op^H|| above 1e-12 * max(1, max|op|).
EigResult hermitian_eigendecompose(const GradedOperator& op, bool with_vectors = true);

// Kernel policy: an eigenvalue counts as zero iff it is <= tau * lambda_max.
// The verdict is trustworthy only when the smallest surviving eigenvalue
// clears the threshold by min_gap_ratio; otherwise the stats are degenerate.
struct KernelStats {
  int dim_kernel = 0;
  double lambda_max = 0.0;
  double threshold = 0.0;
  double smallest_nonzero = std::numeric_limits<double>::infinity();
  double gap_ratio = std::numeric_limits<double>::infinity();
  bool degenerate = false;
};

KernelStats kernel_stats(const RealVec& evals_ascending, double lambda_max,
                         double tau = 1e-9, double min_gap_ratio = 100.0);

// Per-degree Laplacian spectra sharing one global threshold scale.
struct DegreeSpectra {
  std::vector<RealVec> eigenvalues;  // ascending within each degree
  std::vector<KernelStats> kernels;
  double lambda_max = 0.0;    // over all degrees
  double max_residual = 0.0;  // worst eigensolve residual
};

DegreeSpectra degree_spectra(const std::vector<Mat>& laplacians,
                             double tau = 1e-9, double min_gap_ratio = 100.0);

std::vector<int> betti_numbers(const DegreeSpectra& spectra);
int euler_characteristic(const std::vector<int>& betti);

// Two-route splitting: E_zero comes from the eigensolve of D, E_plus/E_minus
// from one SVD of the twisted differential. The routes are independent, so
// ortho_residual and the dimension count audit them against each other.
struct HodgeDecomposition {
  Mat E_zero;   // ker D
  Mat E_plus;   // ran d_u, left singular vectors
  Mat E_minus;  // ran d_u^H, right singular vectors
  KernelStats kernel;
  double ortho_residual = 0.0;  // max|E^H E - I| over the stacked basis
  int total_dim = 0;
  bool complete = false;  // dim ker + 2 rank(d_u) == total
};

HodgeDecomposition hodge_decompose(const Mat& d_u, const Mat& D, double tau = 1e-9,
                                   double min_gap_ratio = 100.0);

// Trace of the grading restricted to a kernel basis Q: round(tr Q^H gamma Q).
struct IndexResult {
  int index = 0;
  double rounding_residual = 0.0;
};

IndexResult graded_kernel_index(const Mat& kernel_basis, const Mat& grading);

double heat_trace(const RealVec& evals, double t);

// max over ts of |sum_k (-1)^k Tr exp(-t Delta_k) - chi|
double mckean_singer_residual(const std::vector<RealVec>& degree_evals, int chi,
                              const std::vector<double>& ts);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  int count = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Power-law fit Tr exp(-t Delta) ~ coefficient * t^exponent over the window
// where (a) the two largest truncations agree to saturation_rel and (b) the
// trace still dominates its kernel floor by kernel_factor. Requires spectra
// for at least two truncation sizes, ascending; the fit uses the largest.
struct HeatPoint {
  double t = 0.0;
  double trace = 0.0;       // largest truncation
  double prev_trace = 0.0;  // second largest
  bool in_window = false;
};

struct HeatFit {
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double coefficient = std::numeric_limits<double>::quiet_NaN();
  int window_size = 0;
  std::vector<HeatPoint> points;
};

HeatFit heat_coefficient_fit(const std::vector<RealVec>& spectra_by_size,
                             int kernel_dim, const RealVec& t_grid,
                             double saturation_rel = 0.01,
                             double kernel_factor = 3.0);

// mu_k = (1 + lambda_k(D^2))^{-1/2}, sorted descending.
RealVec mu_from_spectrum(const RealVec& d2_evals);
RealVec concat_spectra(const std::vector<RealVec>& parts);

// Decay-rate estimate mu_k ~ k^{-1/p}: fit log mu against log rank on the
// window [0.1 K, 0.6 K] (1-based ranks; drops the non-asymptotic head and the
// truncation-corrupted tail) and report p_hat = -1/slope.
struct SummabilityFit {
  double p_hat = std::numeric_limits<double>::quiet_NaN();
  double slope = 0.0;
  int k_begin = 0;  // 1-based, inclusive
  int k_end = 0;
};

SummabilityFit spectral_dimension_fit(const RealVec& mu_descending);

struct FamilyFit {
  std::vector<double> p_hats;  // one per size, ascending sizes
  double p_hat = std::numeric_limits<double>::quiet_NaN();  // largest size
  double band = 0.0;  // max - min over sizes
};

FamilyFit family_dimension_fit(const std::vector<RealVec>& mus_by_size);

double power_sum(const RealVec& mu, double p);

// sup_{k >= 2} (mu_1 + ... + mu_k) / log k, the logarithmic growth profile of
// the partial sums (bounded exactly when the sequence is (1,infty)-summable).
double log_profile_sup(const RealVec& mu_descending);

// sup_k sigma_k / k^{(p-1)/p} for p > 1; delegates to the log profile at p = 1.
double p_plus_profile_sup(const RealVec& mu_descending, double p);

}  // namespace nchodge
