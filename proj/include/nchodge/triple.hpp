// Checks for the twisted spectral-triple structure: the conjugation twist
// beta, boundedness of (twisted) commutators with the algebra actions, grading
// compatibility, and the resolvent-scale response of D to twist changes.
//
// Two routes to commutators with the right action exist on purpose: a full
// square-matrix route for small models and a degree-parity staircase route
// that never forms the full matrix, for large truncations.
#pragma once

#include "nchodge/graded.hpp"
#include "nchodge/linalg.hpp"
#include "nchodge/model.hpp"

namespace nchodge {

// beta(a) = e^{u h} a e^{-u h} in coordinates; identity when u = 0 or h = 0.
Vec beta_apply(const SystemModel& model, const Vec& h, double u, const Vec& a);

// Algebraic health of beta: multiplicativity beta(ab) = beta(a)beta(b),
// star compatibility beta(a*) = (beta^{-1}(a))*, and beta^{-1}(beta(a)) = a.
struct TwistMapCheck {
  double multiplicativity = 0.0;
  double star_compatibility = 0.0;
  double inverse_residual = 0.0;
};

TwistMapCheck twist_map_check(const SystemModel& model, const Vec& h, double u,
                              const Vec& a, const Vec& b);

// Left action pi(a) = I (x) L_a. For exact products the commutator collapses
// to the closed form [D_u, pi(a)] = sum_j (T_j - T_j^H) (x) L_{der_j a} R_{e^{-u h}};
// closed_form_residual is the max-abs gap between the two routes.
struct CommutatorCheck {
  double closed_form_residual = 0.0;
  double commutator_norm = 0.0;
};

CommutatorCheck left_commutator_check(const SystemModel& model,
                                      const GradedSpace& space, const Vec& h,
                                      double u, const Vec& a);

// Right action rho(a) = I (x) R_a, full-matrix route.
//   untwisted_norm        ||D_u rho(a) - rho(a) D_u||
//   twisted_norm          ||D_u rho(a) - rho(beta(a)) D_u||
//   scalar_shift_residual max|W(a + s) - W(a)| for the twisted W
struct TwistedCommutatorCheck {
  double untwisted_norm = 0.0;
  double twisted_norm = 0.0;
  double scalar_shift_residual = 0.0;
};

TwistedCommutatorCheck twisted_commutator_check(const SystemModel& model,
                                                const GradedSpace& space,
                                                const Vec& h, double u, const Vec& a,
                                                double scalar_shift = 1.0);

// Same two norms through the blocked complex: D is parity odd and rho(a) is
// degree diagonal, so W maps even degrees to odd and back; ||W|| is the max of
// the two rectangle norms. Peak memory stays at one parity block squared.
struct StaircaseNorms {
  double untwisted = 0.0;
  double twisted = 0.0;
};

StaircaseNorms staircase_commutator_norms(const SystemModel& model,
                                          const GradedSpace& space, const Vec& h,
                                          double u, const Vec& a);

struct GradingCheck {
  double anticommute_residual = 0.0;  // max|gamma D + D gamma|
  double commute_residual = 0.0;      // max|gamma pi(a) - pi(a) gamma|
  double involution_residual = 0.0;   // max|gamma^2 - I|
};

GradingCheck grading_check(const GradedSpace& space, const Mat& D, const Mat& pi_a);

// s(v) = ||(D_{u+v} - D_u)(D_u + i)^{-1}||, the relative size of a twist
// perturbation on the resolvent scale.
double twist_perturbation_scale(const SystemModel& model, const GradedSpace& space,
                                const Vec& h, double u, double v);

}  // namespace nchodge
