#include "nchodge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nchodge {

RealVec geometric_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || points_per_decade < 1)
    throw std::invalid_argument("geometric_grid: need 0 < lo < hi, ppd >= 1");
  int steps = static_cast<int>(std::llround(std::log10(hi / lo) * points_per_decade));
  RealVec g(steps + 1);
  for (int i = 0; i <= steps; ++i)
    g(i) = lo * std::pow(10.0, static_cast<double>(i) / points_per_decade);
  return g;
}

EigResult hermitian_eigendecompose(const Mat& a, bool with_vectors) {
  EigResult r;
  if (with_vectors) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("hermitian_eigendecompose: solver failed");
    r.eigenvalues = es.eigenvalues();
    r.eigenvectors = es.eigenvectors();
    Mat resid = a * r.eigenvectors -
                r.eigenvectors * r.eigenvalues.cast<cd>().asDiagonal();
    r.residual = max_abs(resid) / std::max(1.0, max_abs(a));
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("hermitian_eigendecompose: solver failed");
    r.eigenvalues = es.eigenvalues();
  }
  return r;
}

EigResult hermitian_eigendecompose(const GradedOperator& op, bool with_vectors) {
  if (!op.hermitian)
    throw std::invalid_argument("hermitian_eigendecompose: operator '" +
                                op.provenance + "' lacks the hermitian flag");
  const double res = hermitian_residual(op.mat);
  if (res > 1e-12 * std::max(1.0, max_abs(op.mat)))
    throw std::invalid_argument("hermitian_eigendecompose: operator '" +
                                op.provenance + "' is not Hermitian");
  return hermitian_eigendecompose(op.mat, with_vectors);
}

KernelStats kernel_stats(const RealVec& evals_ascending, double lambda_max,
                         double tau, double min_gap_ratio) {
  KernelStats ks;
  ks.lambda_max = lambda_max;
  ks.threshold = tau * lambda_max;
  for (Eigen::Index i = 0; i < evals_ascending.size(); ++i) {
    if (evals_ascending(i) <= ks.threshold) {
      ++ks.dim_kernel;
    } else {
      ks.smallest_nonzero = evals_ascending(i);
      break;
    }
  }
  if (std::isfinite(ks.smallest_nonzero) && ks.threshold > 0.0) {
    ks.gap_ratio = ks.smallest_nonzero / ks.threshold;
    ks.degenerate = ks.gap_ratio < min_gap_ratio;
  }
  return ks;
}

DegreeSpectra degree_spectra(const std::vector<Mat>& laplacians, double tau,
                             double min_gap_ratio) {
  DegreeSpectra out;
  for (const Mat& lap : laplacians) {
    EigResult eig = hermitian_eigendecompose(lap, true);
    out.max_residual = std::max(out.max_residual, eig.residual);
    if (eig.eigenvalues.size() > 0)
      out.lambda_max = std::max(out.lambda_max, eig.eigenvalues.maxCoeff());
    out.eigenvalues.push_back(std::move(eig.eigenvalues));
  }
  for (const RealVec& ev : out.eigenvalues)
    out.kernels.push_back(kernel_stats(ev, out.lambda_max, tau, min_gap_ratio));
  return out;
}

std::vector<int> betti_numbers(const DegreeSpectra& spectra) {
  std::vector<int> b;
  for (const KernelStats& ks : spectra.kernels) b.push_back(ks.dim_kernel);
  return b;
}

int euler_characteristic(const std::vector<int>& betti) {
  int chi = 0;
  for (std::size_t k = 0; k < betti.size(); ++k)
    chi += (k % 2 == 0 ? betti[k] : -betti[k]);
  return chi;
}

HodgeDecomposition hodge_decompose(const Mat& d_u, const Mat& D, double tau,
                                   double min_gap_ratio) {
  HodgeDecomposition out;
  out.total_dim = static_cast<int>(D.rows());

  EigResult eig = hermitian_eigendecompose(D, true);
  RealVec sq = eig.eigenvalues.array().square();
  double lam_max = sq.size() > 0 ? sq.maxCoeff() : 0.0;
  RealVec sq_sorted = sq;
  std::sort(sq_sorted.data(), sq_sorted.data() + sq_sorted.size());
  out.kernel = kernel_stats(sq_sorted, lam_max, tau, min_gap_ratio);

  std::vector<Eigen::Index> kcols;
  for (Eigen::Index i = 0; i < sq.size(); ++i)
    if (sq(i) <= out.kernel.threshold) kcols.push_back(i);
  out.E_zero.resize(D.rows(), static_cast<Eigen::Index>(kcols.size()));
  for (std::size_t c = 0; c < kcols.size(); ++c)
    out.E_zero.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors.col(kcols[c]);

  Eigen::BDCSVD<Mat> svd(d_u, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& sigma = svd.singularValues();
  const double sigma_cut = std::sqrt(out.kernel.threshold);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > sigma_cut) ++rank;
  out.E_plus = svd.matrixU().leftCols(rank);
  out.E_minus = svd.matrixV().leftCols(rank);

  Eigen::Index dim0 = out.E_zero.cols();
  out.complete = (dim0 + 2 * rank == D.rows());

  Mat stacked(D.rows(), dim0 + 2 * rank);
  stacked << out.E_zero, out.E_plus, out.E_minus;
  Mat gram = stacked.adjoint() * stacked;
  out.ortho_residual = max_abs(Mat(gram - Mat::Identity(gram.rows(), gram.cols())));
  return out;
}

IndexResult graded_kernel_index(const Mat& kernel_basis, const Mat& grading) {
  cd tr = (kernel_basis.adjoint() * grading * kernel_basis).trace();
  IndexResult r;
  r.index = static_cast<int>(std::llround(tr.real()));
  r.rounding_residual = std::abs(tr - cd(static_cast<double>(r.index), 0.0));
  return r;
}

double heat_trace(const RealVec& evals, double t) {
  return (-t * evals.array()).exp().sum();
}

double mckean_singer_residual(const std::vector<RealVec>& degree_evals, int chi,
                              const std::vector<double>& ts) {
  double worst = 0.0;
  for (double t : ts) {
    double super = 0.0;
    for (std::size_t k = 0; k < degree_evals.size(); ++k) {
      double tr = heat_trace(degree_evals[k], t);
      super += (k % 2 == 0 ? tr : -tr);
    }
    worst = std::max(worst, std::abs(super - chi));
  }
  return worst;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.count = static_cast<int>(x.size());
  const double denom = sxx - sx * sx / n;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
  f.slope = (sxy - sx * sy / n) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

HeatFit heat_coefficient_fit(const std::vector<RealVec>& spectra_by_size,
                             int kernel_dim, const RealVec& t_grid,
                             double saturation_rel, double kernel_factor) {
  if (spectra_by_size.size() < 2)
    throw std::invalid_argument("heat_coefficient_fit: need >= 2 truncation sizes");
  const RealVec& last = spectra_by_size.back();
  const RealVec& prev = spectra_by_size[spectra_by_size.size() - 2];
  const double floor = kernel_factor * std::max(kernel_dim, 1);

  HeatFit fit;
  std::vector<double> xs, ys;
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    HeatPoint p;
    p.t = t_grid(i);
    p.trace = heat_trace(last, p.t);
    p.prev_trace = heat_trace(prev, p.t);
    const bool saturated =
        std::abs(p.trace - p.prev_trace) <= saturation_rel * std::abs(p.trace);
    p.in_window = saturated && p.trace >= floor;
    if (p.in_window) {
      xs.push_back(std::log(p.t));
      ys.push_back(std::log(p.trace));
    }
    fit.points.push_back(p);
  }
  fit.window_size = static_cast<int>(xs.size());
  if (fit.window_size >= 3) {
    LineFit lf = fit_line(xs, ys);
    fit.exponent = lf.slope;
    fit.coefficient = std::exp(lf.intercept);
  }
  return fit;
}

RealVec mu_from_spectrum(const RealVec& d2_evals) {
  RealVec mu = (1.0 + d2_evals.array().max(0.0)).rsqrt();
  std::sort(mu.data(), mu.data() + mu.size(), std::greater<double>());
  return mu;
}

RealVec concat_spectra(const std::vector<RealVec>& parts) {
  Eigen::Index total = 0;
  for (const RealVec& p : parts) total += p.size();
  RealVec out(total);
  Eigen::Index at = 0;
  for (const RealVec& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

SummabilityFit spectral_dimension_fit(const RealVec& mu_descending) {
  SummabilityFit f;
  const int K = static_cast<int>(mu_descending.size());
  f.k_begin = std::max(2, static_cast<int>(0.1 * K));
  f.k_end = static_cast<int>(0.6 * K);
  if (f.k_end > K || f.k_end - f.k_begin + 1 < 3) return f;
  std::vector<double> xs, ys;
  for (int k = f.k_begin; k <= f.k_end; ++k) {
    const double m = mu_descending(k - 1);
    if (!(m > 0.0)) break;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(m));
  }
  if (xs.size() < 3) return f;
  LineFit lf = fit_line(xs, ys);
  f.slope = lf.slope;
  if (lf.slope < 0.0) f.p_hat = -1.0 / lf.slope;
  return f;
}

FamilyFit family_dimension_fit(const std::vector<RealVec>& mus_by_size) {
  if (mus_by_size.size() < 3)
    throw std::invalid_argument("family_dimension_fit: need >= 3 sizes");
  FamilyFit fam;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const RealVec& mu : mus_by_size) {
    SummabilityFit f = spectral_dimension_fit(mu);
    fam.p_hats.push_back(f.p_hat);
    lo = std::min(lo, f.p_hat);
    hi = std::max(hi, f.p_hat);
  }
  fam.p_hat = fam.p_hats.back();
  fam.band = hi - lo;
  return fam;
}

double power_sum(const RealVec& mu, double p) {
  return mu.array().pow(p).sum();
}

double log_profile_sup(const RealVec& mu_descending) {
  if (mu_descending.size() < 2) return 0.0;
  double partial = mu_descending(0);
  double sup = 0.0;
  for (Eigen::Index k = 2; k <= mu_descending.size(); ++k) {
    partial += mu_descending(k - 1);
    sup = std::max(sup, partial / std::log(static_cast<double>(k)));
  }
  return sup;
}

double p_plus_profile_sup(const RealVec& mu_descending, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p_plus_profile_sup: need p >= 1");
  if (p == 1.0) return log_profile_sup(mu_descending);
  double partial = 0.0;
  double sup = 0.0;
  const double expo = (p - 1.0) / p;
  for (Eigen::Index k = 1; k <= mu_descending.size(); ++k) {
    partial += mu_descending(k - 1);
    sup = std::max(sup, partial / std::pow(static_cast<double>(k), expo));
  }
  return sup;
}

}  // namespace nchodge
