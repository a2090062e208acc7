// Finite models of an ergodic C*-dynamical system: a matrix algebra H_0 with a
// faithful invariant trace state phi_0, n commuting-with-the-bracket
// derivations (anti-Hermitian matrices in the phi_0-orthonormal coordinates),
// and left/right multiplication operators. Two families are provided:
//   fuzzy sphere: A = M_N(C), phi_0 = Tr/N, der_j = ad(i J_j), su(2) constants
//   nc torus:     Weyl monomials U^k, |k_i| <= M, symmetric cocycle
//                 U^k U^l = exp(-i pi <k, theta l>) U^{k+l}, der_j U^k = 2 pi i k_j U^k
// The torus multiplication is window-truncated; `exact` records whether the
// product closes (matrix models) or is a projected approximation.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nchodge/lie.hpp"
#include "nchodge/linalg.hpp"

namespace nchodge {

struct SystemModel {
  std::string kind;  // "fuzzy_sphere" | "nc_torus"
  bool exact = true;
  int n = 0;   // number of derivations
  int N0 = 0;  // dim of the coordinate space H_0
  LieAlgebra lie;
  std::vector<Mat> der;  // anti-Hermitian N0 x N0
  Vec unit;              // coordinates of 1
  RVec phi0;             // state as a covector: phi_0(a) = phi0 * coords(a)
  std::vector<std::string> basis_labels;

  // fuzzy sphere
  int N = 0;
  std::vector<Mat> J;  // spin-(N-1)/2 generators, Hermitian

  // nc torus
  int M = 0;
  Eigen::MatrixXd theta;            // antisymmetric n x n
  std::vector<std::vector<int>> modes;  // lattice points, lex order

  cd phi(const Vec& a) const { return (phi0 * a)(0); }
  Mat left_mult(const Vec& a) const;
  Mat right_mult(const Vec& a) const;
  Vec mul(const Vec& a, const Vec& b) const { return left_mult(a) * b; }
  Vec star(const Vec& a) const;

  // fuzzy-sphere coordinate maps (orthonormal basis sqrt(N) E_pq, row-major)
  Mat to_matrix(const Vec& coords) const;
  Vec from_matrix(const Mat& a) const;

  // torus: flat index of a mode, or -1 outside the window
  int mode_index(const std::vector<int>& k) const;

  nlohmann::json to_json() const;  // self-describing export
};

SystemModel build_fuzzy_sphere(int N);
// n is theta.rows(); theta must be antisymmetric
SystemModel build_nc_torus(const Eigen::MatrixXd& theta, int M);

// Hermitian conformal generator h. Templates: "j3" (fuzzy, amplitude * J_3) and
// "cos1" (torus, amplitude * (U^{e1} + U^{-e1}) / 2). Amplitude 0 gives h = 0.
Vec build_conformal_element(const SystemModel& model, const std::string& templ,
                            double amplitude);

// e^{s h} for Hermitian h, via eigendecomposition (of the N x N matrix for the
// fuzzy sphere, of the Hermitian truncated L_h applied to the unit for the
// torus). s = 0 or h = 0 return the unit exactly.
Vec exp_element(const SystemModel& model, const Vec& h, double s);

struct SpinLevel {
  int l = 0;
  int dim = 0;           // eigenspace dimension of the Casimir at l(l+1)
  int multiplicity = 0;  // dim / (2l+1)
  double eigenvalue = 0.0;
};

// Decomposition of H_0 under the derivation action via the Casimir
// -sum_j der_j^2; fuzzy sphere only.
std::vector<SpinLevel> multiplicity_report(const SystemModel& model);

struct InvariantResult {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool approximate = false;  // quantity computed through truncated products
};

// Model-level invariant suite (trace property, invariance, skew-adjointness,
// derivation rule, bracket consistency, ergodicity, bimodule commutation,
// star-representation). Randomized probes are seeded.
std::vector<InvariantResult> model_invariants(const SystemModel& model, std::uint64_t seed);

// Seeded Hermitian probe element with unit coordinate norm.
Vec random_hermitian_element(const SystemModel& model, std::uint64_t seed);

}  // namespace nchodge
