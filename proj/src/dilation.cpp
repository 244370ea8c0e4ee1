#include "qlevy/dilation.hpp"

namespace qlevy {
namespace {

Mat rho_of(const CpcTuple& tup, const StarBialgebra& a, const Element& x) {
  Mat out = Mat::Zero(tup.k_dim, tup.k_dim);
  for (int k = 0; k < a.dim; ++k) out += x(k) * tup.rho[k];
  return out;
}

Vec delta_of(const CpcTuple& tup, const StarBialgebra& a, const Element& x) {
  return rho_of(tup, a, x) * tup.xi - a.eps(x) * tup.xi;
}

Cx lambda_of(const CpcTuple& tup, const StarBialgebra& a, const Element& x) {
  Cx v = a.eps(x) * (tup.t - tup.xi.squaredNorm());
  if (tup.k_dim) v += (tup.xi.adjoint() * rho_of(tup, a, x) * tup.xi)(0);
  return v;
}

}  // namespace

DilationResult dilate_cpc(const StarBialgebra& a, const CpcTuple& tup,
                          double tol) {
  const int nk = tup.noise_dim;
  const int kk = tup.k_dim;
  if (tup.e_vec.squaredNorm() > -tup.t + tol)
    throw std::invalid_argument("dilate_cpc: |e|^2 > -t");
  if (operator_norm(tup.d_op) > 1.0 + tol)
    throw std::invalid_argument("dilate_cpc: D is not a contraction");

  DilationResult out;
  const int nk2 = nk + kk + 1;  // k0 + K + C
  out.enlarged_noise_dim = nk2;

  // D1 = (I_K - D D*)^{1/2}; d1 = -D e so that D-tilde d-tilde = 0
  Mat d1 = psd_sqrt(Mat::Identity(kk, kk) - tup.d_op * tup.d_op.adjoint());
  double t_plus_e2 = -(tup.t + tup.e_vec.squaredNorm());
  double d2 = std::sqrt(std::max(0.0, t_plus_e2));

  Mat d_tilde(kk, nk2);
  d_tilde.block(0, 0, kk, nk) = tup.d_op;
  d_tilde.block(0, nk, kk, kk) = d1;
  d_tilde.block(0, nk + kk, kk, 1).setZero();
  Vec dt_vec(nk2);
  dt_vec.segment(0, nk) = tup.d_vec;
  dt_vec.segment(nk, kk) = -(tup.d_op * tup.e_vec);
  dt_vec(nk + kk) = d2;
  out.d_tilde = d_tilde;
  out.d_tilde_vec = dt_vec;

  // psi on the enlarged hat space, through the specified block form
  const int h2 = 1 + nk2;
  out.psi.algebra = a.name;
  out.psi.target_dim = h2;
  out.psi.mats.assign(a.dim, Mat::Zero(h2, h2));
  for (int i = 0; i < a.dim; ++i) {
    Element ei = Element::Unit(a.dim, i);
    Mat& m = out.psi.mats[i];
    m(0, 0) = lambda_of(tup, a, ei);
    Vec lower = a.counit(i) * dt_vec;
    RowVec upper = a.counit(i) * dt_vec.adjoint();
    if (kk) {
      lower += d_tilde.adjoint() * delta_of(tup, a, ei);
      upper +=
          delta_of(tup, a, Element(a.involution.col(i))).adjoint() * d_tilde;
    }
    m.block(1, 0, nk2, 1) = lower;
    m.block(0, 1, 1, nk2) = upper;
    Mat srho = kk ? Mat(d_tilde.adjoint() * tup.rho[i] * d_tilde)
                  : Mat::Zero(nk2, nk2);
    m.block(1, 1, nk2, nk2) =
        srho - a.counit(i) * Mat::Identity(nk2, nk2);
  }

  // the five homomorphism conditions
  Report& rep = out.report;
  Mat ddagd = d_tilde * d_tilde.adjoint();
  rep.add("homprecise_i_partial_isometry",
          (d_tilde * d_tilde.adjoint() * d_tilde - d_tilde)
              .cwiseAbs()
              .maxCoeff(),
          tol);
  rep.add("homprecise_ii_Dd_zero",
          kk ? (d_tilde * dt_vec).cwiseAbs().maxCoeff() : 0.0, tol);
  double commut = 0.0;
  for (int i = 0; i < a.dim; ++i)
    commut = std::max(commut,
                      (ddagd * tup.rho[i] - tup.rho[i] * ddagd)
                          .cwiseAbs()
                          .maxCoeff());
  rep.add("homprecise_iii_DDstar_commutant", commut, tol);
  rep.add("homprecise_iv_t_norm",
          std::abs(tup.t + dt_vec.squaredNorm()), tol);
  double ddelta = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    Vec di = delta_of(tup, a, Element(Element::Unit(a.dim, i)));
    double r = kk ? (ddagd * di - di).cwiseAbs().maxCoeff() : 0.0;
    ddelta = std::max(ddelta, r);
  }
  rep.add("homprecise_v_DDstar_delta", ddelta, tol);

  // compression back to the original generator
  MatrixValuedMap orig = cpc_tuple_to_map(a, tup);
  MatrixValuedMap comp = compress(out.psi, nk);
  double comp_res = 0.0;
  for (int i = 0; i < a.dim; ++i)
    comp_res = std::max(
        comp_res, (comp.mats[i] - orig.mats[i]).cwiseAbs().maxCoeff());
  rep.add("compression", comp_res, 1e-10);

  if (!rep.pass())
    throw std::runtime_error("dilate_cpc: construction check failed");
  return out;
}

StinespringResult stinespring_generators(const StarBialgebra& a,
                                         const CpcTuple& tup, const Mat& b,
                                         double tol) {
  const int nk = tup.noise_dim;
  const int kk = tup.k_dim;
  if (b.rows() != nk || b.cols() != kk)
    throw std::invalid_argument("stinespring_generators: B shape mismatch");
  if (operator_norm(b) > 1.0 + tol)
    throw std::invalid_argument("stinespring_generators: B is not contractive");

  StinespringResult out;
  const int h = 1 + nk + kk;  // hat of k0 + K
  out.theta.algebra = a.name;
  out.theta.target_dim = h;
  out.theta.mats.assign(a.dim, Mat::Zero(h, h));
  for (int i = 0; i < a.dim; ++i) {
    Element ei = Element::Unit(a.dim, i);
    Mat& m = out.theta.mats[i];
    m(0, 0) = lambda_of(tup, a, ei) - tup.t * a.counit(i);
    if (kk) {
      m.block(0, 1 + nk, 1, kk) =
          delta_of(tup, a, Element(a.involution.col(i))).adjoint();
      m.block(1 + nk, 0, kk, 1) = delta_of(tup, a, ei);
      m.block(1 + nk, 1 + nk, kk, kk) =
          tup.rho[i] - a.counit(i) * Mat::Identity(kk, kk);
    }
    m.block(1, 1, nk, nk) = -a.counit(i) * Mat::Identity(nk, nk);
  }

  // tau carries the d-vector in the scalar-to-k0 slot (the displayed xi is a
  // typo: the verification needs phi(1)'s off-diagonal block there)
  out.tau = Mat::Zero(h, h);
  out.tau(0, 0) = 0.5 * tup.t;
  out.tau.block(0, 1, 1, nk) = tup.d_vec.adjoint();
  out.tau.block(1, 1, nk, nk) = -Mat::Identity(nk, nk);
  out.tau.block(1, 1 + nk, nk, kk) = b;
  out.tau.block(1 + nk, 1, kk, nk) = tup.d_op;
  out.tau.block(1 + nk, 1 + nk, kk, kk) = -Mat::Identity(kk, kk);

  Report& rep = out.report;
  const Mat dqs = qs_delta(h);
  Mat con = out.tau + out.tau.adjoint() + out.tau.adjoint() * dqs * out.tau;
  Mat want = Mat::Zero(h, h);
  want(0, 0) = tup.t;
  want.block(0, 1, 1, nk) = tup.d_vec.adjoint();
  want.block(1, 0, nk, 1) = tup.d_vec;
  want.block(1, 1, nk, nk) =
      tup.d_op.adjoint() * tup.d_op - Mat::Identity(nk, nk);
  want.block(1 + nk, 1 + nk, kk, kk) =
      b.adjoint() * b - Mat::Identity(kk, kk);
  rep.add("tau_block_identity", (con - want).cwiseAbs().maxCoeff(), tol);
  // relative negativity: max eigenvalue <= tol (|con| + 1)
  rep.add("tau_negativity",
          std::max(0.0, max_hermitian_eigenvalue(con)) /
              (operator_norm(con) + 1.0),
          tol);

  // theta is multiplicative and real but not unital: theta(1) carries the
  // dead -I block on the k0 directions that W absorbs
  Report sr = check_structure_relation(a, out.theta, tol);
  for (const auto& e : sr.entries()) {
    if (e.name == "vanishes_at_unit")
      rep.add_info("theta_structure." + e.name, e.residual, e.tol);
    else
      rep.add("theta_structure." + e.name, e.residual, e.tol);
  }

  // psi(a) = eps(a) con + (I + tau* Dqs) theta(a) (I + Dqs tau)
  //        = diag(phi(a), -eps(a) I_K)
  MatrixValuedMap phi = cpc_tuple_to_map(a, tup);
  const Mat left = Mat::Identity(h, h) + out.tau.adjoint() * dqs;
  const Mat right = Mat::Identity(h, h) + dqs * out.tau;
  double id_res = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    Mat psi_i = a.counit(i) * con + left * out.theta.mats[i] * right;
    Mat want_i = Mat::Zero(h, h);
    want_i.block(0, 0, 1 + nk, 1 + nk) = phi.mats[i];
    want_i.block(1 + nk, 1 + nk, kk, kk) =
        -a.counit(i) * Mat::Identity(kk, kk);
    id_res = std::max(id_res, (psi_i - want_i).cwiseAbs().maxCoeff());
  }
  rep.add("stinespring_identity", id_res, 1e-10);

  if (!rep.pass())
    throw std::runtime_error("stinespring_generators: verification failed");
  return out;
}

MatrixValuedMap compress(const MatrixValuedMap& psi, int k0_dim) {
  const int h = psi.target_dim;
  if (k0_dim + 1 > h)
    throw std::invalid_argument("compress: k0 exceeds the noise dimension");
  MatrixValuedMap out;
  out.algebra = psi.algebra;
  out.target_dim = 1 + k0_dim;
  out.mats.reserve(psi.mats.size());
  for (const Mat& m : psi.mats)
    out.mats.push_back(m.block(0, 0, 1 + k0_dim, 1 + k0_dim));
  return out;
}

}  // namespace qlevy
