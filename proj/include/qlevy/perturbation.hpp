// The diamond calculus of operator-cocycle generators, Weyl perturbations,
// the Euclidean group action on Schurmann triples and group cocycle data.
#pragma once

#include <optional>

#include "qlevy/schurmann.hpp"

namespace qlevy {

// Operators on the hat space C + C^{n_k}, block form [[z, beta],[d, R - I]].
using HatOperator = Mat;

Mat qs_delta(int hat_dim);  // diag(0, I)

HatOperator diamond(const HatOperator& l, const HatOperator& m);

struct EuclideanElement {
  double mu = 0.0;
  Vec v;   // in C^r
  Mat big_v;  // r x r unitary
};

HatOperator weyl_generator(const EuclideanElement& e, double tol = 1e-10);

// Euclidean composition matching weyl(e1) diamond weyl(e2).
EuclideanElement euclidean_product(const EuclideanElement& e1,
                                   const EuclideanElement& e2);

struct IsometryFlags {
  bool isometric = false;
  bool coisometric = false;
  double iso_residual = 0.0;
  double coiso_residual = 0.0;
};
IsometryFlags is_isometric_generator(const HatOperator& l, double tol = 1e-10);

// (L diamond phi diamond M)(a); either side may be absent.
MatrixValuedMap diamond_conjugate(const StarBialgebra& a,
                                  const MatrixValuedMap& phi,
                                  const std::optional<HatOperator>& l,
                                  const std::optional<HatOperator>& m);

// Transformed triple (gamma~, delta~, rho~) under (mu, v, V).
SchurmannTriple euclidean_action(const StarBialgebra& a,
                                 const SchurmannTriple& t,
                                 const EuclideanElement& e);

struct GroupCocycleResult {
  std::vector<HatOperator> psi;  // one hat operator per group element
  MatrixValuedMap phi;           // the generator on the group bialgebra
  Report report;
};

// psi_g = [[i lambda_g - |xi_g|^2/2, -<xi_g| U_g],[|xi_g>, U_g - I]] from a
// unitary representation U, a U-cocycle xi and a phase map lambda; verifies
// the cocycle conditions and the diamond composition law psi_{gh} = psi_g
// diamond psi_h.
GroupCocycleResult group_cocycle_generator(
    const std::vector<std::vector<int>>& group_table,
    const std::vector<double>& lambda, const std::vector<Vec>& xi,
    const std::vector<Mat>& u, double tol = 1e-10);

}  // namespace qlevy
