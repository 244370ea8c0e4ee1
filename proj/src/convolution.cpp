#include "qlevy/convolution.hpp"

namespace qlevy {

Mat MatrixValuedMap::apply(const Element& x) const {
  Mat out = Mat::Zero(target_dim, target_dim);
  for (std::size_t i = 0; i < mats.size(); ++i) out += x(i) * mats[i];
  return out;
}

MatrixValuedMap MatrixValuedMap::from_functional(const StarBialgebra& a,
                                                 const RowVec& f) {
  MatrixValuedMap m;
  m.algebra = a.name;
  m.target_dim = 1;
  m.mats.reserve(a.dim);
  for (int i = 0; i < a.dim; ++i) {
    Mat s(1, 1);
    s(0, 0) = f(i);
    m.mats.push_back(s);
  }
  return m;
}

RowVec MatrixValuedMap::functional() const {
  if (target_dim != 1)
    throw std::invalid_argument("functional(): target dimension is not 1");
  RowVec f(static_cast<int>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) f(i) = mats[i](0, 0);
  return f;
}

MatrixValuedMap convolve(const StarBialgebra& a, const MatrixValuedMap& alpha,
                         const MatrixValuedMap& beta) {
  if (alpha.algebra != beta.algebra)
    throw std::invalid_argument("convolve: bialgebra mismatch");
  if (static_cast<int>(alpha.mats.size()) != a.dim ||
      static_cast<int>(beta.mats.size()) != a.dim)
    throw std::invalid_argument("convolve: dimension mismatch");
  MatrixValuedMap out;
  out.algebra = alpha.algebra;
  out.target_dim = alpha.target_dim * beta.target_dim;
  check_dense_budget(static_cast<std::int64_t>(out.target_dim) *
                         out.target_dim * a.dim,
                     "convolve");
  out.mats.assign(a.dim, Mat::Zero(out.target_dim, out.target_dim));
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      for (int k = 0; k < a.dim; ++k) {
        Cx c = a.cop[i](j, k);
        if (c == Cx(0, 0)) continue;
        out.mats[i] += c * kron(alpha.mats[j], beta.mats[k]);
      }
  return out;
}

MatrixValuedMap counit_map(const StarBialgebra& a) {
  return MatrixValuedMap::from_functional(a, a.counit);
}

MatrixValuedMap star_power(const StarBialgebra& a, const MatrixValuedMap& gamma,
                           int n) {
  if (n < 0) throw std::invalid_argument("star_power: n < 0");
  if (n == 0) return counit_map(a);
  // contraction against Delta_{n-1}, built up through the recursion
  // phi^{star (m+1)} = (phi^{star m} ox phi) o Delta
  MatrixValuedMap acc = gamma;
  for (int m = 1; m < n; ++m) acc = convolve(a, acc, gamma);
  return acc;
}

ROperator r_map(const StarBialgebra& a, const MatrixValuedMap& phi) {
  ROperator r;
  r.algebra_dim = a.dim;
  r.target_dim = phi.target_dim;
  const int n = phi.target_dim;
  check_dense_budget(static_cast<std::int64_t>(a.dim) * n * a.dim * n, "r_map");
  r.op = Mat::Zero(a.dim * n, a.dim * n);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      for (int k = 0; k < a.dim; ++k) {
        Cx c = a.cop[i](j, k);
        if (c == Cx(0, 0)) continue;
        r.op.block(j * n, i * n, n, n) += c * phi.mats[k];
      }
  return r;
}

MatrixValuedMap e_map(const StarBialgebra& a, const ROperator& r) {
  const int n = r.target_dim;
  if (r.op.rows() != a.dim * n)
    throw std::invalid_argument("e_map: operator size mismatch");
  MatrixValuedMap out;
  out.algebra = a.name;
  out.target_dim = n;
  out.mats.assign(a.dim, Mat::Zero(n, n));
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      out.mats[i] += a.counit(j) * r.op.block(j * n, i * n, n, n);
  return out;
}

double star_norm(const StarBialgebra& a, const RowVec& gamma) {
  return operator_norm(r_map(a, MatrixValuedMap::from_functional(a, gamma)).op);
}

ExpStarResult exp_star(const StarBialgebra& a, const RowVec& gamma, double t,
                       ExpStarMethod method, double tol) {
  if (!std::isfinite(t)) throw std::invalid_argument("exp_star: t not finite");
  ExpStarResult out;
  if (method == ExpStarMethod::kSemigroup) {
    Mat r = r_map(a, MatrixValuedMap::from_functional(a, gamma)).op;
    Mat e = expm(t * r);
    out.functional = a.counit * e;
    return out;
  }
  RowVec acc = a.counit;  // n = 0 term
  RowVec term = gamma;    // gamma^{star n} as a functional
  double coeff = 1.0;
  int n = 1;
  for (; n <= kExpStarMaxOrder; ++n) {
    coeff *= t / n;
    RowVec add = coeff * term;
    acc += add;
    out.achieved_bound = add.cwiseAbs().maxCoeff();
    if (out.achieved_bound < tol) break;
    // next star power: (gamma^{star n} star gamma)(e_i)
    RowVec next = RowVec::Zero(a.dim);
    for (int i = 0; i < a.dim; ++i) {
      Cx v(0, 0);
      for (int j = 0; j < a.dim; ++j)
        for (int k = 0; k < a.dim; ++k) {
          Cx c = a.cop[i](j, k);
          if (c != Cx(0, 0)) v += c * term(j) * gamma(k);
        }
      next(i) = v;
    }
    term = next;
  }
  if (n > kExpStarMaxOrder) {
    double nrm = star_norm(a, gamma);
    double x = std::abs(t) * nrm;
    double tail = std::exp(x);
    for (int k = 1; k <= kExpStarMaxOrder + 1; ++k) tail *= x / k;
    throw std::runtime_error(
        "exp_star series did not converge within " +
        std::to_string(kExpStarMaxOrder) + " terms; certificate tail bound " +
        std::to_string(tail) + ", last term " +
        std::to_string(out.achieved_bound));
  }
  out.terms_used = n;
  out.functional = acc;
  return out;
}

Report check_semigroup_law(const StarBialgebra& a, const RowVec& gamma,
                           const std::vector<double>& sample_times,
                           double tol) {
  Report rep;
  for (double s : sample_times)
    for (double t : sample_times) {
      RowVec full =
          exp_star(a, gamma, s + t, ExpStarMethod::kSemigroup).functional;
      MatrixValuedMap ks = MatrixValuedMap::from_functional(
          a, exp_star(a, gamma, s, ExpStarMethod::kSemigroup).functional);
      MatrixValuedMap kt = MatrixValuedMap::from_functional(
          a, exp_star(a, gamma, t, ExpStarMethod::kSemigroup).functional);
      RowVec conv = convolve(a, ks, kt).functional();
      rep.add("semigroup(s=" + std::to_string(s) + ",t=" + std::to_string(t) +
                  ")",
              (full - conv).cwiseAbs().maxCoeff(), tol);
    }
  return rep;
}

double idempotency_residual(const StarBialgebra& a, const RowVec& lambda) {
  MatrixValuedMap l = MatrixValuedMap::from_functional(a, lambda);
  return (convolve(a, l, l).functional() - lambda).cwiseAbs().maxCoeff();
}

Mat choi_of_rmap(const StarBialgebra& a, const RowVec& kappa) {
  if (a.canonical_rep.empty())
    throw std::invalid_argument(
        "choi_of_rmap: bialgebra has no canonical representation");
  const int d = a.dim;
  const int m = static_cast<int>(a.canonical_rep[0].rows());
  Mat rk = r_map(a, MatrixValuedMap::from_functional(a, kappa)).op;
  Mat choi = Mat::Zero(d * m, d * m);
  for (int i = 0; i < d; ++i) {
    Element istar = a.involution.col(i);
    for (int j = 0; j < d; ++j) {
      Element prod = multiply(a, istar, Element(Element::Unit(d, j)));
      Element mapped = rk * prod;  // R kappa applied to e_i* e_j
      Mat rep_val = Mat::Zero(m, m);
      for (int k = 0; k < d; ++k) rep_val += mapped(k) * a.canonical_rep[k];
      choi.block(i * m, j * m, m, m) = rep_val;
    }
  }
  return choi;
}

}  // namespace qlevy
