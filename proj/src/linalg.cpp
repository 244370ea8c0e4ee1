#include "qlevy/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qlevy {

void check_dense_budget(std::int64_t entries, const char* what) {
  if (entries < 0 || entries > kMaxDenseEntries) {
    throw std::length_error(std::string(what) +
                            ": dense storage exceeds the memory cap");
  }
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > kMaxDenseEntries / base) return kMaxDenseEntries + 1;
    r *= base;
  }
  return r;
}

Mat kron(const Mat& a, const Mat& b) {
  check_dense_budget(a.size() * b.size(), "kron");
  return Eigen::kroneckerProduct(a, b);
}

Vec kron_vec(const Vec& a, const Vec& b) {
  check_dense_budget(a.size() * b.size(), "kron_vec");
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Mat expm(const Mat& a) { return a.exp(); }

Eigen::VectorXd hermitian_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_hermitian_eigenvalue(const Mat& h) {
  if (h.rows() == 0) return 0.0;
  return hermitian_eigenvalues(h).minCoeff();
}

double max_hermitian_eigenvalue(const Mat& h) {
  if (h.rows() == 0) return 0.0;
  return hermitian_eigenvalues(h).maxCoeff();
}

Mat psd_sqrt(const Mat& h, double clip) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0) {
      if (ev(i) < -clip * std::max(1.0, ev.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("psd_sqrt: matrix is not PSD");
      ev(i) = 0.0;
    }
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

Mat pinv(const Mat& a, double rel_tol) {
  if (a.size() == 0) return Mat(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = rel_tol * sv.maxCoeff();
  Eigen::VectorXd inv = sv;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    inv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

PsdFactor psd_factor(const Mat& g, double rel_rank_tol) {
  PsdFactor out;
  if (g.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.adjoint()));
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  out.min_eigenvalue = ev.minCoeff();
  double cutoff = rel_rank_tol * std::max(ev.maxCoeff(), 0.0);
  std::vector<int> keep;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i)
    if (ev(i) > cutoff) keep.push_back(static_cast<int>(i));
  out.rank = static_cast<int>(keep.size());
  out.x = Mat(out.rank, g.cols());
  for (int r = 0; r < out.rank; ++r)
    out.x.row(r) =
        std::sqrt(ev(keep[r])) * es.eigenvectors().col(keep[r]).adjoint();
  return out;
}

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  if (std::min(a.rows(), a.cols()) <= 32) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues().maxCoeff();
  }
  // largest eigenvalue of a^dag a; much faster than a full SVD at size
  Mat gram = a.adjoint() * a;
  return std::sqrt(std::max(0.0, max_hermitian_eigenvalue(gram)));
}

double operator_norm_upper_bound(const Mat& a) {
  if (a.size() == 0) return 0.0;
  double linf = 0.0, l1 = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    linf = std::max(linf, a.row(i).cwiseAbs().sum());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    l1 = std::max(l1, a.col(j).cwiseAbs().sum());
  return std::sqrt(l1 * linf);
}

Mat nullspace(const Mat& a, double rel_tol) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() ? rel_tol * std::max(sv.maxCoeff(), 1.0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Mat tensor_slot_permutation(int h, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  const std::int64_t dim = ipow(h, n);
  check_dense_budget(dim * dim, "tensor_slot_permutation");
  Mat p = Mat::Zero(dim, dim);
  std::vector<int> in_idx(n, 0);
  for (std::int64_t col = 0; col < dim; ++col) {
    // decode col as (i_1,...,i_n), big-endian in slot order
    std::int64_t rest = col;
    for (int s = n - 1; s >= 0; --s) {
      in_idx[s] = static_cast<int>(rest % h);
      rest /= h;
    }
    std::int64_t row = 0;
    std::vector<int> out_idx(n, 0);
    for (int s = 0; s < n; ++s) out_idx[perm[s]] = in_idx[s];
    for (int s = 0; s < n; ++s) row = row * h + out_idx[s];
    p(row, col) = 1.0;
  }
  return p;
}

Mat tensor_reversal(int h, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = n - 1 - i;
  return tensor_slot_permutation(h, perm);
}

DenseTensor::DenseTensor(int axis_dim, int rank)
    : axis_dim_(axis_dim), rank_(rank) {
  std::int64_t sz = ipow(axis_dim, rank);
  check_dense_budget(sz, "DenseTensor");
  data_.assign(static_cast<std::size_t>(sz), Cx(0, 0));
}

std::int64_t DenseTensor::offset(const std::vector<int>& idx) const {
  std::int64_t off = 0;
  for (int i : idx) off = off * axis_dim_ + i;
  return off;
}

Cx& DenseTensor::at(const std::vector<int>& idx) {
  return data_[static_cast<std::size_t>(offset(idx))];
}

const Cx& DenseTensor::at(const std::vector<int>& idx) const {
  return data_[static_cast<std::size_t>(offset(idx))];
}

double DenseTensor::max_abs_diff(const DenseTensor& other) const {
  if (other.size() != size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

}  // namespace qlevy
