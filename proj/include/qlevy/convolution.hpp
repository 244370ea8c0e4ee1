// Convolution of functionals and matrix-valued maps, the star-exponential
// (series route and semigroup route), and the R/E transforms that turn
// convolution into operator composition.
#pragma once

#include "qlevy/bialgebra.hpp"
#include "qlevy/report.hpp"

namespace qlevy {

// A linear map from the algebra into N x N complex matrices, stored through
// its values on the basis.  N = 1 recovers scalar functionals.
struct MatrixValuedMap {
  std::string algebra;     // name of the underlying bialgebra
  int target_dim = 1;      // N
  std::vector<Mat> mats;   // d matrices, N x N

  Mat apply(const Element& x) const;
  static MatrixValuedMap from_functional(const StarBialgebra& a, const RowVec& f);
  RowVec functional() const;  // requires target_dim == 1
};

// R phi = (id ox phi) o Delta as a matrix on the coordinates of A ox C^N
// (algebra index major: component (j,u) at position j*N + u).
struct ROperator {
  int algebra_dim = 0;
  int target_dim = 0;
  Mat op;  // (d*N) x (d*N)
};

MatrixValuedMap convolve(const StarBialgebra& a, const MatrixValuedMap& alpha,
                         const MatrixValuedMap& beta);

MatrixValuedMap star_power(const StarBialgebra& a, const MatrixValuedMap& gamma,
                           int n);

MatrixValuedMap counit_map(const StarBialgebra& a);  // eps as a MatrixValuedMap

enum class ExpStarMethod { kSeries, kSemigroup };

inline constexpr int kExpStarMaxOrder = 64;

struct ExpStarResult {
  RowVec functional;
  int terms_used = 0;         // series route only
  double achieved_bound = 0;  // sup-norm of the last term (series route)
};

// exp_star(t gamma) for a scalar functional gamma.  The series route sums
// t^n gamma^{star n}/n! until the term's sup-norm over basis elements drops
// below tol; the semigroup route returns eps o expm(t R(gamma)).
ExpStarResult exp_star(const StarBialgebra& a, const RowVec& gamma, double t,
                       ExpStarMethod method, double tol = 1e-14);

ROperator r_map(const StarBialgebra& a, const MatrixValuedMap& phi);
MatrixValuedMap e_map(const StarBialgebra& a, const ROperator& r);

// Operator norm of R(gamma); the convolution norm controlling series tails.
double star_norm(const StarBialgebra& a, const RowVec& gamma);

// kappa_{s+t} = kappa_s star kappa_t for every pair from sample_times.
Report check_semigroup_law(const StarBialgebra& a, const RowVec& gamma,
                           const std::vector<double>& sample_times,
                           double tol = 1e-9);

// residual of lambda = lambda star lambda
double idempotency_residual(const StarBialgebra& a, const RowVec& lambda);

// Choi-type matrix of R(kappa) with respect to the bialgebra's canonical
// representation: C[(i,u),(j,v)] = rep(R kappa (e_i* e_j))[u,v].
Mat choi_of_rmap(const StarBialgebra& a, const RowVec& kappa);

}  // namespace qlevy
