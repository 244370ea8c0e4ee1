// Generators of cocycles: conditional positivity, GNS reconstruction of
// Schurmann triples, structure-map block forms, innerness solves and the
// standard form of completely positive contraction generators.
#pragma once

#include "qlevy/bialgebra.hpp"
#include "qlevy/convolution.hpp"
#include "qlevy/report.hpp"

namespace qlevy {

// (gamma, delta, rho): functional, column-vector-valued derivation and a
// unital *-representation on the noise space C^r.
struct SchurmannTriple {
  std::string algebra;
  int r = 0;
  RowVec gamma;           // d entries
  Mat delta;              // r x d, column i = delta(e_i)
  std::vector<Mat> rho;   // d matrices, r x r

  Vec delta_of(const Element& x) const { return delta * x; }
  Mat rho_of(const Element& x) const;
};

struct ConditionalPositivity {
  bool verdict = false;
  double min_eigenvalue = 0.0;
  Mat gram;  // Gram matrix over a basis of Ker eps
};

// Conditional positivity through the kernel-of-eps Gram criterion.  On a
// unital algebra this equals positivity on positive elements of Ker eps:
// eps is multiplicative, so eps(a* a) = |eps(a)|^2 and a* a lies in Ker eps
// exactly when a does; sums of such squares are handled by PSD-ness of the
// Gram matrix gamma(b_i* b_j) over a Ker-eps basis.
ConditionalPositivity is_conditionally_positive(const StarBialgebra& a,
                                                const RowVec& gamma,
                                                double tol = 1e-9);

// GNS-type reconstruction of a Schurmann triple from a real, conditionally
// positive functional vanishing at the unit.  gauge_mix, when nonzero, seeds
// a unitary rotation of the quotient coordinates (the output is equivalent
// up to gauge; used to exercise uniqueness-up-to-isometry).
SchurmannTriple gns_reconstruct(const StarBialgebra& a, const RowVec& gamma,
                                double tol_rank = 1e-9,
                                unsigned gauge_mix = 0);

// phi(a) = [[gamma(a), delta(a*)^dag], [delta(a), rho(a) - eps(a) I_r]].
MatrixValuedMap triple_to_structure_map(const StarBialgebra& a,
                                        const SchurmannTriple& t);

// Extract the triple blocks back out of a structure-map-shaped map.
SchurmannTriple structure_map_to_triple(const StarBialgebra& a,
                                        const MatrixValuedMap& phi);

// phi(a*b) = phi(a)^dag eps(b) + conj(eps(a)) phi(b) + phi(a)^dag D^QS phi(b),
// reality and phi(1) = 0.
Report check_structure_relation(const StarBialgebra& a,
                                const MatrixValuedMap& phi,
                                double tol = kTolExact);

// Residuals of the three Schurmann-triple axioms.
Report check_triple(const StarBialgebra& a, const SchurmannTriple& t,
                    double tol = kTolExact);

struct InnerVector {
  Vec xi;
  double residual = 0.0;
};
// Least squares solve of delta(e_i) = (rho(e_i) - eps(e_i) I) xi.
InnerVector find_implementing_vector(const StarBialgebra& a,
                                     const std::vector<Mat>& rho,
                                     const Mat& delta);

// Tuple (K, rho, D, xi, d, e, t) describing a CPC cocycle generator.
struct CpcTuple {
  std::string algebra;
  int k_dim = 0;          // dim K
  int noise_dim = 0;      // n_k
  std::vector<Mat> rho;   // d matrices, K x K
  Mat d_op;               // K x n_k contraction D
  Vec xi;                 // in C^K
  Vec d_vec;              // in C^{n_k}
  Vec e_vec;              // in C^{n_k}
  double t = 0.0;
  int e_nullspace_dim = 0;  // ambiguity of e when I - D^dag D is singular
};

// Kolmogorov/GNS construction of the standard form of a CPC generator.
// Throws if the nonnegative-definite kernel fails PSD or the round trip
// through the specified block form exceeds tol.
CpcTuple cpc_standard_form(const StarBialgebra& a, const MatrixValuedMap& phi,
                           double tol = 1e-8, unsigned gauge_mix = 0);

// Rebuild phi from a tuple through the specified block form, with
// lambda(a) = eps(a)(t - |xi|^2) + <xi, rho(a) xi>.
MatrixValuedMap cpc_tuple_to_map(const StarBialgebra& a, const CpcTuple& tup);

// Verdict on the CPC decomposition phi = psi - eps(.)(D^QS + rank-2(chi)).
Report check_cpc_form(const StarBialgebra& a, const MatrixValuedMap& phi,
                      double tol = 1e-8);

}  // namespace qlevy
