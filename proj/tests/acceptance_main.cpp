// End-to-end acceptance harness. Each numbered criterion prints exactly one
// [PASS]/[FAIL] line with the measured numbers inline; the exit code is the
// number of failed criteria. Expected values come from independent oracles
// (mode lattices, Casimir counts, Gaussian integrals), recomputed here.
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nchodge/config.hpp"
#include "nchodge/model.hpp"
#include "nchodge/operators.hpp"
#include "nchodge/report.hpp"
#include "nchodge/runner.hpp"
#include "nchodge/spectral.hpp"
#include "nchodge/triple.hpp"
#include "oracles.hpp"

using namespace nchodge;

namespace {

int g_failed = 0;

void verdict(int id, const char* label, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %s: %s\n", ok ? "PASS" : "FAIL", id, label, detail.c_str());
  if (!ok) ++g_failed;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Eigen::MatrixXd golden_theta() {
  Eigen::MatrixXd th(2, 2);
  const double t = 0.6180339887498949;
  th << 0.0, t, -t, 0.0;
  return th;
}

struct CellAnalysis {
  std::vector<int> betti;
  int chi = 0;
  int odd_index = 0;
  double ortho = 0.0;
  double ms_residual = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  double odd_rounding = 0.0;
  bool complete = false;
  int dims_sum = 0;
  int total = 0;
};

CellAnalysis analyze_cell(const SystemModel& m, const GradedSpace& space,
                          const Vec& h, double u) {
  GradedOperator d = build_d(m, space);
  Mat du = build_K(m, space, h, u).mat * d.mat * build_K(m, space, h, -u).mat;
  Mat D = build_D(m, space, h, u).mat;
  DegreeSpectra ds = degree_spectra(build_laplacians(space, D));
  HodgeDecomposition hd = hodge_decompose(du, D);
  IndexResult idx = graded_kernel_index(hd.E_zero, space_grading(space));

  CellAnalysis out;
  out.betti = betti_numbers(ds);
  out.chi = euler_characteristic(out.betti);
  out.odd_index = idx.index;
  out.odd_rounding = idx.rounding_residual;
  out.ortho = hd.ortho_residual;
  out.ms_residual = mckean_singer_residual(ds.eigenvalues, out.chi, {0.1, 1.0, 10.0});
  for (const KernelStats& ks : ds.kernels)
    out.min_gap = std::min(out.min_gap, ks.gap_ratio);
  out.complete = hd.complete;
  out.dims_sum =
      static_cast<int>(hd.E_zero.cols() + hd.E_plus.cols() + hd.E_minus.cols());
  out.total = hd.total_dim;
  return out;
}

// family spectra -> mu lists, through the per-degree blocked complex
std::vector<RealVec> family_mus(const std::string& kind, const std::vector<int>& sizes,
                                double amplitude, double u) {
  std::vector<RealVec> mus;
  for (int s : sizes) {
    SystemModel m = kind == "fuzzy_sphere" ? build_fuzzy_sphere(s)
                                           : build_nc_torus(golden_theta(), s);
    GradedSpace space(m.n, m.N0);
    Vec h = build_conformal_element(m, kind == "fuzzy_sphere" ? "j3" : "cos1",
                                    amplitude);
    BlockedComplex bc = build_blocked_complex(m, space, h, u);
    std::vector<RealVec> evs;
    for (const Mat& lap : bc.laplacians())
      evs.push_back(hermitian_eigendecompose(lap, false).eigenvalues);
    mus.push_back(mu_from_spectrum(concat_spectra(evs)));
  }
  return mus;
}

}  // namespace

int main() {
  std::printf("acceptance: conformal Hodge laboratory\n");

  // ---- 1. complex integrity: d^2 = 0 and exact adjointness ----------------
  {
    bool ok = true;
    double worst_d2 = 0.0, worst_adj = 0.0;
    auto probe = [&](const SystemModel& m) {
      GradedSpace space(m.n, m.N0);
      GradedOperator d = build_d(m, space);
      const double dn = operator_norm(d.mat);
      const double d2 = operator_norm(Mat(d.mat * d.mat));
      worst_d2 = std::max(worst_d2, d2 / std::max(1e-300, dn * dn));
      ok = ok && d2 <= 1e-10 * dn * dn;

      GradedOperator da = build_d_adjoint(d);
      double adj = d_adjoint_crosscheck(m, space, da.mat);
      // pairing <d x, y> = <x, d* y> on coordinate probes
      Vec x = Vec::Zero(space.total_dim()), y = Vec::Zero(space.total_dim());
      for (int i = 0; i < space.total_dim(); ++i) {
        x(i) = cd(std::cos(0.7 * i + 0.3), std::sin(1.3 * i));
        y(i) = cd(std::sin(0.4 * i), std::cos(0.9 * i + 1.1));
      }
      x /= x.norm();
      y /= y.norm();
      adj = std::max(adj, std::abs((Vec(d.mat * x).adjoint() * y)(0) -
                                   (x.adjoint() * Vec(da.mat * y))(0)) /
                              std::max(1.0, dn));
      worst_adj = std::max(worst_adj, adj);
      ok = ok && adj <= 1e-10;
    };
    for (int N = 2; N <= 6; ++N) probe(build_fuzzy_sphere(N));
    for (int M = 1; M <= 4; ++M) probe(build_nc_torus(golden_theta(), M));
    verdict(1, "complex integrity (sphere N=2..6, torus M=1..4)", ok,
            fmt("max ||d^2||/||d||^2 = %.2e, max adjoint residual = %.2e",
                worst_d2, worst_adj));
  }

  // ---- 2..4. Hodge split, conformal invariance of chi, index identities ---
  {
    bool ok2 = true, ok3 = true, ok4 = true;
    double worst_ortho = 0.0, worst_gap = std::numeric_limits<double>::infinity();
    double worst_ms = 0.0;
    for (int N : {2, 3, 4}) {
      SystemModel m = build_fuzzy_sphere(N);
      GradedSpace space(m.n, m.N0);
      for (double amp : {0.0, 0.3, 0.6}) {
        Vec h = build_conformal_element(m, "j3", amp);
        for (double u : {0.0, 0.5, 1.0}) {
          CellAnalysis c = analyze_cell(m, space, h, u);
          worst_ortho = std::max(worst_ortho, c.ortho);
          worst_gap = std::min(worst_gap, c.min_gap);
          worst_ms = std::max(worst_ms, c.ms_residual);
          ok2 = ok2 && c.ortho <= 1e-9 && c.dims_sum == c.total && c.complete;
          ok3 = ok3 && c.betti == std::vector<int>{1, 0, 0, 1} && c.chi == 0 &&
                c.min_gap >= 100.0;
          ok4 = ok4 && c.chi == c.odd_index && c.ms_residual <= 1e-8 &&
                c.odd_rounding <= 1e-8;
        }
      }
    }
    // torus cells at h = 0
    for (int M : {2, 4}) {
      SystemModel m = build_nc_torus(golden_theta(), M);
      GradedSpace space(m.n, m.N0);
      Vec h0 = Vec::Zero(m.N0);
      for (double u : {0.0, 1.0}) {
        CellAnalysis c = analyze_cell(m, space, h0, u);
        worst_ortho = std::max(worst_ortho, c.ortho);
        worst_gap = std::min(worst_gap, c.min_gap);
        worst_ms = std::max(worst_ms, c.ms_residual);
        ok2 = ok2 && c.ortho <= 1e-9 && c.dims_sum == c.total;
        ok3 = ok3 && c.betti == std::vector<int>{1, 2, 1} && c.chi == 0;
        ok4 = ok4 && c.chi == c.odd_index && c.ms_residual <= 1e-8;
      }
    }
    verdict(2, "Hodge decomposition orthogonality and completeness", ok2,
            fmt("max cross-basis residual = %.2e, dimension sums exact", worst_ortho));
    verdict(3, "conformal invariance of cohomology", ok3,
            fmt("sphere dims (1,0,0,1), torus dims (1,2,1), chi = 0, "
                "min kernel-gap ratio = %.1e",
                worst_gap));
    verdict(4, "chi = odd index = McKean-Singer at t in {0.1,1,10}", ok4,
            fmt("max alternating-trace residual = %.2e", worst_ms));
  }

  // ---- 5. conjugation identity at u = 1/2 ---------------------------------
  {
    bool ok = true;
    double worst = 0.0;
    for (int N : {2, 3}) {
      SystemModel m = build_fuzzy_sphere(N);
      GradedSpace space(m.n, m.N0);
      Mat d = build_d(m, space).mat;
      ConformalMaps cm =
          build_conformal_maps(m, space, build_conformal_element(m, "j3", 0.3), d);
      worst = std::max(worst, cm.conjugation_residual);
      ok = ok && cm.conjugation_residual <= 1e-9 && cm.unitarity_residual <= 1e-9 &&
           cm.gram_min_eigenvalue > 0.0;
    }
    verdict(5, "unitary conjugation onto D_{1/2} (sphere N=2,3, amp 0.3)", ok,
            fmt("max ||U*(d + d_phi*)U - D_half|| = %.2e", worst));
  }

  // ---- 6. summability: fitted spectral dimension vs Weyl-count oracle -----
  {
    bool ok = true;
    std::string detail;

    // oracle fits from brute-force eigenvalue counts
    std::vector<RealVec> sphere_oracle, torus_oracle;
    for (int N : {4, 8, 12, 16})
      sphere_oracle.push_back(mu_from_spectrum(oracles::sphere_casimir_spectrum(N)));
    for (int M : {4, 8, 16})
      torus_oracle.push_back(mu_from_spectrum(oracles::torus_lattice_spectrum(2, M)));
    const double sphere_ref = family_dimension_fit(sphere_oracle).p_hat;
    const double torus_ref = family_dimension_fit(torus_oracle).p_hat;

    for (auto [amp, u] : std::vector<std::pair<double, double>>{{0.0, 0.0},
                                                                {0.3, 0.5}}) {
      FamilyFit sf =
          family_dimension_fit(family_mus("fuzzy_sphere", {4, 8, 12, 16}, amp, u));
      FamilyFit tf = family_dimension_fit(family_mus("nc_torus", {4, 8, 16}, amp, u));
      detail += fmt("(h=%.1f,u=%.1f): sphere %.3f vs oracle %.3f, torus %.3f vs "
                    "oracle %.3f; ",
                    amp, u, sf.p_hat, sphere_ref, tf.p_hat, torus_ref);
      ok = ok && std::abs(sf.p_hat - sphere_ref) <= 0.5 && sf.p_hat <= 3.5 &&
           std::abs(tf.p_hat - torus_ref) <= 0.4 && tf.p_hat <= 2.4;
    }
    verdict(6, "summability dimension fits (sphere N=4..16, torus M=4..16)", ok,
            detail);
  }

  // ---- 7. heat-trace asymptotics on the commutative torus (non-fatal) -----
  {
    RealVec grid = geometric_grid(1e-3, 10.0, 16);
    auto delta0_family = [&](int n, const std::vector<int>& sizes) {
      std::vector<RealVec> out;
      Eigen::MatrixXd th = Eigen::MatrixXd::Zero(n, n);
      for (int M : sizes) {
        SystemModel m = build_nc_torus(th, M);
        GradedSpace space(m.n, m.N0);
        BlockedComplex bc = build_blocked_complex(m, space, Vec::Zero(m.N0), 0.0);
        Mat lap0 = bc.A[0].adjoint() * bc.A[0];
        out.push_back(hermitian_eigendecompose(lap0, false).eigenvalues);
      }
      return out;
    };
    HeatFit f1 = heat_coefficient_fit(delta0_family(1, {8, 16, 32}), 1, grid);
    HeatFit f2 = heat_coefficient_fit(delta0_family(2, {4, 8, 16}), 1, grid);
    const double a0 = oracles::gaussian_heat_coefficient(2);
    const bool in_band = std::abs(f1.exponent + 0.5) <= 0.1 &&
                         std::abs(f2.exponent + 1.0) <= 0.1 &&
                         std::abs(f2.coefficient - a0) <= 0.1 * a0;
    // deviations are reported, not fatal: the fit window is truncation-limited
    verdict(7, "heat-trace exponents and leading coefficient (non-fatal)", true,
            fmt("n=1 exponent %.4f (target -0.5), n=2 exponent %.4f (target -1), "
                "n=2 coefficient %.5f vs Gaussian oracle %.5f%s",
                f1.exponent, f2.exponent, f2.coefficient, a0,
                in_band ? "" : " [DEVIATION REPORTED]"));
  }

  // ---- 8. twisted-triple structure ----------------------------------------
  {
    bool ok = true;
    double worst_closed = 0.0, worst_beta = 0.0, worst_shift = 0.0;
    for (int N : {2, 3, 4}) {
      SystemModel m = build_fuzzy_sphere(N);
      GradedSpace space(m.n, m.N0);
      Vec h = build_conformal_element(m, "j3", 0.3);
      std::vector<Vec> elems;
      for (int j = 0; j < 3; ++j) elems.push_back(m.from_matrix(m.J[j]));
      elems.push_back(random_hermitian_element(m, 2026));
      for (double u : {0.5, 1.0}) {
        for (const Vec& a : elems) {
          CommutatorCheck cc = left_commutator_check(m, space, h, u, a);
          worst_closed =
              std::max(worst_closed, cc.closed_form_residual /
                                         std::max(1e-300, cc.commutator_norm));
          ok = ok && cc.closed_form_residual <= 1e-9 * cc.commutator_norm + 1e-12;
        }
        TwistMapCheck tm = twist_map_check(m, h, u, elems.back(), elems.front());
        worst_beta = std::max({worst_beta, tm.multiplicativity,
                               tm.star_compatibility, tm.inverse_residual});
        ok = ok && tm.multiplicativity <= 1e-10 && tm.star_compatibility <= 1e-10 &&
             tm.inverse_residual <= 1e-10;
        TwistedCommutatorCheck tw =
            twisted_commutator_check(m, space, h, u, elems.back(), 1.0);
        worst_shift = std::max(worst_shift, tw.scalar_shift_residual);
        ok = ok && tw.scalar_shift_residual <= 1e-12;
      }
    }

    // torus growth contrast through the staircase route
    std::vector<double> untw, tw;
    for (int M : {4, 8, 16}) {
      SystemModel m = build_nc_torus(golden_theta(), M);
      GradedSpace space(m.n, m.N0);
      Vec h = build_conformal_element(m, "cos1", 0.3);
      Vec a = Vec::Zero(m.N0);
      a(m.mode_index({0, 1})) = 1.0;
      StaircaseNorms ns = staircase_commutator_norms(m, space, h, 1.0, a);
      untw.push_back(ns.untwisted);
      tw.push_back(ns.twisted);
    }
    const double growth = untw.back() / untw.front();
    const double spread =
        (*std::max_element(tw.begin(), tw.end()) -
         *std::min_element(tw.begin(), tw.end())) /
        *std::min_element(tw.begin(), tw.end());
    ok = ok && growth >= 2.0 && spread <= 0.5;

    verdict(8, "twisted-triple structure", ok,
            fmt("closed-form rel residual %.1e, beta residual %.1e, scalar-shift "
                "%.1e; untwisted norms M=4/8/16: %.2f/%.2f/%.2f (growth %.2fx >= 2), "
                "twisted %.2f/%.2f/%.2f (spread %.1f%% <= 50%%)",
                worst_closed, worst_beta, worst_shift, untw[0], untw[1], untw[2],
                growth, tw[0], tw[1], tw[2], 100.0 * spread));
  }

  // ---- 9. multiplicity bound ----------------------------------------------
  {
    bool ok = true;
    for (int N = 2; N <= 6; ++N) {
      auto levels = multiplicity_report(build_fuzzy_sphere(N));
      ok = ok && static_cast<int>(levels.size()) == N;
      for (const SpinLevel& lv : levels)
        ok = ok && lv.multiplicity == 1 && lv.multiplicity <= 2 * lv.l + 1 &&
             lv.dim == 2 * lv.l + 1;
    }
    verdict(9, "Casimir multiplicities m = 1 <= 2l+1 (sphere N=2..6)", ok,
            "every spin level l = 0..N-1 present with multiplicity 1");
  }

  // ---- 10. determinism ------------------------------------------------------
  {
    nlohmann::json doc = {{"model", {{"type", "fuzzy_sphere"}, {"N", 3}}},
                          {"family", {{"sizes", {2, 3, 4}}}}};
    RunConfig cfg = parse_config(doc);
    auto base = std::filesystem::temp_directory_path() / "nchodge-acceptance";
    std::filesystem::remove_all(base);
    RunOutcome r1 = run_pipeline(cfg, "all", (base / "a").string());
    RunOutcome r2 = run_pipeline(cfg, "all", (base / "b").string());
    const std::string b1 = read_text_file(r1.run_dir + "/report.json");
    const std::string b2 = read_text_file(r2.run_dir + "/report.json");
    verdict(10, "byte-identical reports for identical config and seed",
            r1.invariants_pass && b1 == b2,
            fmt("%zu bytes, invariants %s", b1.size(),
                r1.invariants_pass ? "all pass" : "FAILED"));
  }

  std::printf("%d of 10 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
