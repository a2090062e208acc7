#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "nchodge/model.hpp"

using namespace nchodge;

namespace {

Eigen::MatrixXd theta2(double t) {
  Eigen::MatrixXd th(2, 2);
  th << 0.0, t, -t, 0.0;
  return th;
}

Vec mode_delta(const SystemModel& m, int k1, int k2) {
  Vec v = Vec::Zero(m.N0);
  v(m.mode_index({k1, k2})) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("fuzzy sphere basics") {
  SystemModel m = build_fuzzy_sphere(2);
  CHECK(m.N0 == 4);
  CHECK(m.n == 3);
  CHECK(m.exact);

  // [der_1, der_2] = -der_3 exactly, matching c[k][i][j] = -eps_{ijk}
  Mat comm = m.der[0] * m.der[1] - m.der[1] * m.der[0];
  CHECK(max_abs(Mat(comm + m.der[2])) <= 1e-14);

  // phi_0 kills every derivative (trace of a commutator)
  for (const Mat& d : m.der) CHECK((m.phi0 * d).cwiseAbs().maxCoeff() <= 1e-14);

  // coordinate round-trip and the unit
  Vec a = random_hermitian_element(m, 7);
  CHECK(max_abs(Vec(m.from_matrix(m.to_matrix(a)) - a)) <= 1e-14);
  CHECK(max_abs(Mat(m.to_matrix(m.unit) - Mat::Identity(2, 2))) <= 1e-14);

  CHECK_THROWS_AS(build_fuzzy_sphere(1), std::invalid_argument);
}

TEST_CASE("model invariant suite passes on exact and truncated models") {
  for (int N = 2; N <= 4; ++N) {
    SystemModel m = build_fuzzy_sphere(N);
    for (const InvariantResult& r : model_invariants(m, 3)) {
      INFO("fuzzy N=", N, " ", r.name, " residual=", r.residual);
      CHECK(r.pass);
    }
  }
  for (int M = 1; M <= 3; ++M) {
    SystemModel m = build_nc_torus(theta2(0.6180339887498949), M);
    for (const InvariantResult& r : model_invariants(m, 3)) {
      INFO("torus M=", M, " ", r.name, " residual=", r.residual);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("torus mode structure and derivations") {
  SystemModel m = build_nc_torus(theta2(0.37), 1);
  CHECK(m.N0 == 9);
  CHECK(!m.exact);

  // der_1 = diag(2 pi i k_1): kernel has the three k_1 = 0 modes
  int ker1 = 0;
  for (int i = 0; i < 9; ++i)
    if (std::abs(m.der[0](i, i)) < 1e-14) ++ker1;
  CHECK(ker1 == 3);
  CHECK(max_abs(Mat(m.der[0] - Mat(m.der[0].diagonal().asDiagonal()))) == 0.0);
  CHECK(m.der[0](m.mode_index({1, 0}), m.mode_index({1, 0})) ==
        cd(0.0, 2.0 * M_PI));

  // joint kernel is the unit line only
  int joint = 0;
  for (int i = 0; i < 9; ++i)
    if (std::abs(m.der[0](i, i)) + std::abs(m.der[1](i, i)) < 1e-14) ++joint;
  CHECK(joint == 1);

  Eigen::MatrixXd bad(2, 2);
  bad << 0.0, 0.3, 0.3, 0.0;
  CHECK_THROWS_AS(build_nc_torus(bad, 1), std::invalid_argument);
}

TEST_CASE("torus cocycle phases") {
  const double t = 0.6180339887498949;
  SystemModel m = build_nc_torus(theta2(t), 2);
  Vec u10 = mode_delta(m, 1, 0), u01 = mode_delta(m, 0, 1);

  // U^k U^l = exp(-i pi <k, theta l>) U^{k+l}
  cd fwd = m.mul(u10, u01)(m.mode_index({1, 1}));
  cd bwd = m.mul(u01, u10)(m.mode_index({1, 1}));
  CHECK(std::abs(fwd - std::polar(1.0, -M_PI * t)) <= 1e-12);
  CHECK(std::abs(bwd - std::conj(fwd)) <= 1e-12);  // conjugate order, conjugate phase
  CHECK(std::abs(fwd / bwd - std::polar(1.0, -2.0 * M_PI * t)) <= 1e-12);

  // stars invert modes: (U^k)* = U^{-k}
  Vec s = m.star(u10);
  CHECK(std::abs(s(m.mode_index({-1, 0})) - 1.0) <= 1e-15);

  // commutative torus: every phase is 1
  SystemModel c = build_nc_torus(theta2(0.0), 2);
  Vec p = c.mul(mode_delta(c, 1, 0), mode_delta(c, 0, 1));
  CHECK(std::abs(p(c.mode_index({1, 1})) - 1.0) <= 1e-15);
}

TEST_CASE("commutative window nesting") {
  // theta = 0, window M -> M+1: left multiplication restricted to the smaller
  // window agrees with the smaller model
  SystemModel small = build_nc_torus(theta2(0.0), 1);
  SystemModel big = build_nc_torus(theta2(0.0), 2);
  Vec a_small = random_hermitian_element(small, 5);
  Vec a_big = Vec::Zero(big.N0);
  for (int i = 0; i < small.N0; ++i) a_big(big.mode_index(small.modes[i])) = a_small(i);

  Mat L_small = small.left_mult(a_small);
  Mat L_big = big.left_mult(a_big);
  for (int i = 0; i < small.N0; ++i)
    for (int j = 0; j < small.N0; ++j)
      CHECK(std::abs(L_small(i, j) - L_big(big.mode_index(small.modes[i]),
                                           big.mode_index(small.modes[j]))) <= 1e-15);
}

TEST_CASE("conformal elements and exponentials") {
  SystemModel m = build_fuzzy_sphere(2);

  // amplitude 0 is h = 0 with identity exponentials
  Vec h0 = build_conformal_element(m, "j3", 0.0);
  CHECK(max_abs(h0) == 0.0);
  CHECK(max_abs(Vec(exp_element(m, h0, 1.0) - m.unit)) == 0.0);
  CHECK(max_abs(Vec(exp_element(m, build_conformal_element(m, "j3", 0.5), 0.0) -
                    m.unit)) == 0.0);

  // N=2 template J_3 with amplitude s has matrix eigenvalues +-s/2
  Vec h = build_conformal_element(m, "j3", 0.7);
  Eigen::SelfAdjointEigenSolver<Mat> es(m.to_matrix(h));
  CHECK(std::abs(es.eigenvalues()(0) + 0.35) <= 1e-14);
  CHECK(std::abs(es.eigenvalues()(1) - 0.35) <= 1e-14);

  // exact group law for the sphere
  Vec w = m.mul(exp_element(m, h, 1.0), exp_element(m, h, -1.0));
  CHECK(max_abs(Vec(w - m.unit)) <= 1e-12);
  Mat LL = m.left_mult(exp_element(m, h, 0.5)) * m.left_mult(exp_element(m, h, -0.5));
  CHECK(max_abs(Mat(LL - Mat::Identity(m.N0, m.N0))) <= 1e-12);

  // torus template is a real cosine: Hermitian, two symmetric modes
  SystemModel t = build_nc_torus(theta2(0.3), 2);
  Vec ht = build_conformal_element(t, "cos1", 0.4);
  CHECK(max_abs(Vec(t.star(ht) - ht)) <= 1e-15);
  CHECK(std::abs(ht(t.mode_index({1, 0})) - 0.2) <= 1e-15);
  CHECK(std::abs(ht(t.mode_index({-1, 0})) - 0.2) <= 1e-15);

  // template/model mismatches are parameter errors
  CHECK_THROWS_AS(build_conformal_element(m, "cos1", 0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_conformal_element(t, "j3", 0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_conformal_element(m, "nope", 0.1), std::invalid_argument);
}

TEST_CASE("derivative of the exponential obeys the smooth-element bound") {
  // || der_j(e^h) || <= || der_j(h) || * e^{||h||} in matrix operator norms
  for (int N = 2; N <= 6; ++N) {
    SystemModel m = build_fuzzy_sphere(N);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      Vec h = random_hermitian_element(m, seed);
      Vec eh = exp_element(m, h, 1.0);
      const double grow = std::exp(operator_norm(m.to_matrix(h)));
      for (int j = 0; j < m.n; ++j) {
        const double lhs = operator_norm(m.to_matrix(Vec(m.der[j] * eh)));
        const double rhs =
            operator_norm(m.to_matrix(Vec(m.der[j] * h))) * grow;
        INFO("N=", N, " seed=", seed, " j=", j, " lhs=", lhs, " rhs=", rhs);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("Casimir multiplicity report") {
  for (int N = 2; N <= 6; ++N) {
    SystemModel m = build_fuzzy_sphere(N);
    auto levels = multiplicity_report(m);
    REQUIRE(static_cast<int>(levels.size()) == N);
    for (int l = 0; l < N; ++l) {
      CHECK(levels[l].l == l);
      CHECK(levels[l].multiplicity == 1);
      CHECK(levels[l].dim == 2 * l + 1);
      CHECK(levels[l].multiplicity <= 2 * l + 1);
      CHECK(std::abs(levels[l].eigenvalue - l * (l + 1.0)) <= 1e-9 * (1 + l * l));
    }
  }
}

TEST_CASE("random hermitian probes are hermitian and normalized") {
  for (const SystemModel& m :
       {build_fuzzy_sphere(3), build_nc_torus(theta2(0.41), 2)}) {
    Vec a = random_hermitian_element(m, 11);
    CHECK(max_abs(Vec(m.star(a) - a)) <= 1e-14);
    CHECK(std::abs(a.norm() - 1.0) <= 1e-12);
    // seeded: same seed, same element
    CHECK(max_abs(Vec(random_hermitian_element(m, 11) - a)) == 0.0);
  }
}
