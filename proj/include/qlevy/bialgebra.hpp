// Finite-dimensional *-bialgebras given by structure constants, together
// with the example builders (group algebras, function algebras, Delsarte
// fixed-point hyperbialgebras) and numeric validation of every axiom.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlevy/linalg.hpp"
#include "qlevy/report.hpp"

namespace qlevy {

using Element = Vec;  // coordinates in the basis of a named bialgebra

struct BialgebraFlags {
  bool coproduct_is_homomorphic = true;
  bool is_hopf = false;
  bool is_hyper = false;
};

// A *-bialgebra on C^d described by structure constants:
//   e_i e_j        = sum_k  mult[i](j,k) e_k
//   Delta(e_i)     = sum_jk cop[i](j,k)  e_j ox e_k
//   (sum x_i e_i)* = sum_j (involution * conj(x))_j e_j
struct StarBialgebra {
  std::string name;
  int dim = 0;
  std::vector<std::string> basis_labels;
  std::vector<Mat> mult;  // mult[i] is d x d, (j,k) entry = m[i][j][k]
  Vec unit;
  std::vector<Mat> cop;   // cop[i] is d x d, (j,k) entry = c[i][j][k]
  RowVec counit;
  Mat involution;
  std::optional<Mat> antipode;
  BialgebraFlags flags;
  // Canonical faithful *-representation (installed by the builders where
  // one is available); used for Choi-type positivity checks.
  std::vector<Mat> canonical_rep;

  Cx eps(const Element& x) const { return (counit * x)(0); }
  Element star(const Element& x) const { return involution * x.conjugate(); }
  // Coefficient matrix of Delta(x): entry (j,k) multiplies e_j ox e_k.
  Mat coproduct_matrix(const Element& x) const;
};

// Default tolerance for exact algebraic identities.
inline constexpr double kTolExact = 1e-10;

Element multiply(const StarBialgebra& a, const Element& x, const Element& y);

// Delta_n(x) as a rank-(n+1) tensor over the basis; Delta_0 = id.
DenseTensor iterated_coproduct(const StarBialgebra& a, const Element& x, int n);

// Residual of (Delta_i ox Delta_j) o Delta = Delta_{i+j+1} on basis element b.
double com_ij_residual(const StarBialgebra& a, int i, int j, int b);

Report validate(const StarBialgebra& a, double tol = kTolExact);

// Monoid/group tables are row-major index tables: table[i][j] = index of i*j.
StarBialgebra build_function_bialgebra(const std::vector<std::vector<int>>& table);
StarBialgebra build_group_bialgebra(const std::vector<std::vector<int>>& table);
StarBialgebra build_trivial_bialgebra();  // C itself

StarBialgebra opposite(const StarBialgebra& a);

struct DelsarteResult {
  StarBialgebra sub;
  Mat projection;      // P on the ambient algebra
  Mat subalgebra_basis;  // d x d' column basis of Ran P
  Report report;       // P-identities and automorphism checks
};
// Fixed-point hyperbialgebra of a finite group of bialgebra automorphisms.
DelsarteResult delsarte_construct(const StarBialgebra& a,
                                  const std::vector<Mat>& action,
                                  double tol = kTolExact);

// Haar state by solving the invariance system; nullopt when infeasible.
struct HaarResult {
  RowVec state;
  double invariance_residual = 0.0;
  double gram_min_eigenvalue = 0.0;
};
std::optional<HaarResult> haar_state(const StarBialgebra& a,
                                     double tol = kTolExact);

// Least-squares antipode solve for m(S ox id)Delta = eps(.)1 = m(id ox S)Delta.
struct AntipodeSolve {
  Mat antipode;
  double residual = 0.0;
};
AntipodeSolve solve_antipode(const StarBialgebra& a);

// Corepresentation check for a matrix v of algebra elements (coordinates as
// columns of a d x (n*n) matrix, entry (i,j) at column i*n+j).
Report check_unitary_corepresentation(const StarBialgebra& a,
                                      const std::vector<std::vector<Element>>& v,
                                      double tol = kTolExact);

// Gram matrix g[i][j] = phi(e_i* e_j) for a scalar functional phi.
Mat functional_gram(const StarBialgebra& a, const RowVec& phi);

// max_i |phi(e_i*) - conj(phi(e_i))|.
double functional_reality_residual(const StarBialgebra& a, const RowVec& phi);

bool is_cocommutative(const StarBialgebra& a, double tol = kTolExact);

// Entrywise comparison of the defining tensors of two bialgebras.
double bialgebra_max_diff(const StarBialgebra& a, const StarBialgebra& b);

}  // namespace qlevy
