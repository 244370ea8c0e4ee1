// Dense complex linear algebra helpers shared by all modules: Kronecker
// products, Hermitian spectral routines, PSD square roots, pseudo-inverses,
// the matrix exponential and tensor-slot permutation operators.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qlevy {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RowVec = Eigen::RowVectorXcd;

// Hard cap on dense tensor/matrix storage, in complex entries.
inline constexpr std::int64_t kMaxDenseEntries = 100'000'000;

// Throws std::length_error if a dense object with `entries` complex entries
// would exceed the configured memory cap.
void check_dense_budget(std::int64_t entries, const char* what);

// Integer power with overflow guard (used for tensor-power dimensions).
std::int64_t ipow(std::int64_t base, int exp);

Mat kron(const Mat& a, const Mat& b);
Vec kron_vec(const Vec& a, const Vec& b);

inline Mat dagger(const Mat& a) { return a.adjoint(); }

// Matrix exponential (Pade + scaling/squaring via Eigen).
Mat expm(const Mat& a);

// Eigenvalues of a (numerically) Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Mat& h);
double min_hermitian_eigenvalue(const Mat& h);
double max_hermitian_eigenvalue(const Mat& h);

// Hermitian PSD square root; eigenvalues below `clip` are clipped to zero.
Mat psd_sqrt(const Mat& h, double clip = 1e-12);

// Moore-Penrose pseudo-inverse with relative singular-value cutoff.
Mat pinv(const Mat& a, double rel_tol = 1e-12);

// Factorisation of a Hermitian PSD matrix G as X.adjoint()*X where X has
// rank rows; rank is decided by the relative eigenvalue cutoff.
struct PsdFactor {
  Mat x;           // rank x n, with x.adjoint()*x == G
  int rank = 0;
  double min_eigenvalue = 0.0;  // smallest eigenvalue of G (PSD diagnostics)
};
PsdFactor psd_factor(const Mat& g, double rel_rank_tol = 1e-9);

double operator_norm(const Mat& a);

// sqrt(|a|_1 |a|_inf) >= |a|_2; cheap certificate screening.
double operator_norm_upper_bound(const Mat& a);

// Orthonormal basis of the null space of `a` (columns), relative tolerance.
Mat nullspace(const Mat& a, double rel_tol = 1e-12);

// Permutation operator on the n-fold tensor power of C^h sending slot i of
// the input to slot perm[i] of the output:
//   P (v_1 ox ... ox v_n) = w_1 ox ... ox w_n  with  w_perm[i] = v_i.
Mat tensor_slot_permutation(int h, const std::vector<int>& perm);

// Reversal permutation on (C^h)^{ox n}.
Mat tensor_reversal(int h, int n);

// Dense tensor of arbitrary rank with uniform axis length, row-major.
class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(int axis_dim, int rank);

  int rank() const { return rank_; }
  int axis_dim() const { return axis_dim_; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

  Cx& at(const std::vector<int>& idx);
  const Cx& at(const std::vector<int>& idx) const;
  Cx& flat(std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  const Cx& flat(std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  std::int64_t offset(const std::vector<int>& idx) const;
  double max_abs_diff(const DenseTensor& other) const;

 private:
  int axis_dim_ = 0;
  int rank_ = 0;
  std::vector<Cx> data_;
};

}  // namespace qlevy
