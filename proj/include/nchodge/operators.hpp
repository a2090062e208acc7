// Assembly of the differential complex on H = H_0 (x) Lambda g* and its
// conformal deformations. All operators are matrices in the reference
// orthonormal coordinates (the h = 0 inner product); conformal geometry enters
// through the invertible positive weights K_u and the Gram matrix G_phi.
//
//   d     = sum_j T_j (x) der_j + B (x) I           (degree +1, d^2 = 0)
//   K_u   = blockdiag_k R_{exp((n/2-k) u h)}        (degree 0, Hermitian, K_0 = I)
//   D_u   = K_u d K_{-u} + K_{-u} d^H K_u           (Hermitian, parity odd)
//   Delta_k = degree-k block of D_u^2
#pragma once

#include <vector>

#include "nchodge/graded.hpp"
#include "nchodge/model.hpp"

namespace nchodge {

GradedOperator build_d(const SystemModel& model, const GradedSpace& space);

// Conjugate transpose in the orthonormal coordinates; this is the adjoint for
// the reference inner product.
GradedOperator build_d_adjoint(const GradedOperator& d);

// Independent combinatorial route to the adjoint: sum_j der_j^H (x) A_j plus
// the transposed bracket operator, with A_j the deletion operator built
// without transposing T_j. Returns the max-abs mismatch with d_adj.
double d_adjoint_crosscheck(const SystemModel& model, const GradedSpace& space,
                            const Mat& d_adj);

GradedOperator build_K(const SystemModel& model, const GradedSpace& space,
                       const Vec& h, double u);

GradedOperator build_D(const SystemModel& model, const GradedSpace& space,
                       const Vec& h, double u);

// Degree-diagonal blocks of D^2 (Hermitian PSD). off_degree_residual reports
// the largest |entry| of D^2 outside those blocks, relative to max|D^2|.
std::vector<Mat> build_laplacians(const GradedSpace& space, const Mat& D,
                                  double* off_degree_residual = nullptr);

// Maps between the reference space and the conformal inner product
// (a, b)_phi = phi_0(a* b e^{(n/2-k)h}) per degree k; exact models only.
//   G    Gram matrix of the reference basis under ( , )_phi (= R weights)
//   U    unitary (H, ref) -> (H, phi): right multiplication by e^{-(n/2-k)h/2}
//   d_phi_star = G^{-1} d^H G, the ( , )_phi-adjoint of d
// unitarity_residual = ||U^H G U - I||, conjugation_residual =
// ||U^* (d + d_phi_star) U - D_{1/2}|| with U^* = U^H G the phi-adjoint.
struct ConformalMaps {
  Mat G;
  Mat U;
  Mat d_phi_star;
  double gram_min_eigenvalue = 0.0;
  double unitarity_residual = 0.0;
  double conjugation_residual = 0.0;
};

ConformalMaps build_conformal_maps(const SystemModel& model, const GradedSpace& space,
                                   const Vec& h, const Mat& d);

// Per-degree blocks of the twisted complex, for models too large for full
// total_dim x total_dim assembly. A[k] is the degree k -> k+1 block of
// d_u = K_u d K_{-u}; the block of d_u^H is A[k]^H.
struct BlockedComplex {
  int n = 0;
  std::vector<int> block_dims;  // per degree, C(n,k) * N0
  std::vector<Mat> A;           // size n

  // Delta_k = A[k]^H A[k] + A[k-1] A[k-1]^H
  std::vector<Mat> laplacians() const;
};

BlockedComplex build_blocked_complex(const SystemModel& model, const GradedSpace& space,
                                     const Vec& h, double u);

}  // namespace nchodge
