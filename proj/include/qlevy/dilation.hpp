// Stochastic dilation of CPC cocycle generators to homomorphic ones on an
// enlarged noise space, and the Stinespring-type generator decomposition.
#pragma once

#include "qlevy/perturbation.hpp"
#include "qlevy/schurmann.hpp"

namespace qlevy {

struct DilationResult {
  int enlarged_noise_dim = 0;  // n_k + K_dim + 1
  MatrixValuedMap psi;         // generator on the enlarged hat space
  Mat d_tilde;                 // [D  -D1-part  0] row of blocks, K x enlarged
  Vec d_tilde_vec;             // (d, -De, d2)
  Report report;               // the five homomorphism conditions + compression
};

// Enlarge the noise space so the CPC tuple's generator becomes homomorphic;
// the vacuum compression returns the original generator.
DilationResult dilate_cpc(const StarBialgebra& a, const CpcTuple& tup,
                          double tol = 1e-9);

struct StinespringResult {
  MatrixValuedMap theta;  // homomorphic generator on k0 + K
  Mat tau;                // perturbation generator on the enlarged hat space
  Report report;
};

// theta and tau of the Stinespring decomposition; verifies the negativity of
// tau + tau* + tau* D^QS tau, the structure relation for theta, and the
// generator-level identity psi = diag(phi, -eps I).
StinespringResult stinespring_generators(const StarBialgebra& a,
                                         const CpcTuple& tup, const Mat& b,
                                         double tol = 1e-9);

// P0 psi(.) P0 restricted to the hat of the first k0_dim noise coordinates.
MatrixValuedMap compress(const MatrixValuedMap& psi, int k0_dim);

}  // namespace qlevy
