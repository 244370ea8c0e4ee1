#include "qlevy/schurmann.hpp"

#include <random>

namespace qlevy {
namespace {

Mat random_unitary(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Cx(nd(gen), nd(gen));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  return q;
}

Mat qs_projection(int hat_dim) {
  Mat d = Mat::Identity(hat_dim, hat_dim);
  d(0, 0) = 0.0;
  return d;
}

}  // namespace

Mat SchurmannTriple::rho_of(const Element& x) const {
  Mat out = Mat::Zero(r, r);
  for (std::size_t i = 0; i < rho.size(); ++i) out += x(i) * rho[i];
  return out;
}

// Basis of Ker eps built from the vectors e_i - eps(e_i) 1, keeping a
// maximal independent subset in basis order.  This matches the hand-worked
// Gram matrices of the worked examples (b = L_1 - L_0 on the order-two
// group algebra, b = +-delta_1 on its function algebra).
Mat kernel_eps_basis(const StarBialgebra& a) {
  const int d = a.dim;
  Mat candidates(d, d);
  for (int i = 0; i < d; ++i)
    candidates.col(i) = Element::Unit(d, i) - a.counit(i) * a.unit;
  Mat basis(d, d);
  int taken = 0;
  for (int i = 0; i < d; ++i) {
    basis.col(taken) = candidates.col(i);
    Eigen::JacobiSVD<Mat> svd(basis.leftCols(taken + 1));
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 1e-10 * std::max(1.0, sv(0))) ++taken;
  }
  return basis.leftCols(taken);
}

ConditionalPositivity is_conditionally_positive(const StarBialgebra& a,
                                                const RowVec& gamma,
                                                double tol) {
  if (functional_reality_residual(a, gamma) > tol)
    throw std::invalid_argument("is_conditionally_positive: gamma is not real");
  ConditionalPositivity out;
  Mat ker = kernel_eps_basis(a);
  const int m = static_cast<int>(ker.cols());
  out.gram = Mat(m, m);
  for (int i = 0; i < m; ++i) {
    Element bi_star = a.star(ker.col(i));
    for (int j = 0; j < m; ++j)
      out.gram(i, j) = (gamma * multiply(a, bi_star, Element(ker.col(j))))(0);
  }
  double herm = m ? (out.gram - out.gram.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  out.min_eigenvalue = m ? min_hermitian_eigenvalue(out.gram) : 0.0;
  out.verdict = herm <= tol && out.min_eigenvalue >= -tol;
  return out;
}

SchurmannTriple gns_reconstruct(const StarBialgebra& a, const RowVec& gamma,
                                double tol_rank, unsigned gauge_mix) {
  const int d = a.dim;
  if (functional_reality_residual(a, gamma) > 1e-9)
    throw std::invalid_argument("gns_reconstruct: gamma is not real");
  if (std::abs((gamma * a.unit)(0)) > 1e-9)
    throw std::invalid_argument("gns_reconstruct: gamma(1) != 0");
  ConditionalPositivity cp = is_conditionally_positive(a, gamma);
  if (!cp.verdict)
    throw std::invalid_argument(
        "gns_reconstruct: gamma is not conditionally positive");

  Mat ker = kernel_eps_basis(a);
  const int m = static_cast<int>(ker.cols());
  PsdFactor f = psd_factor(cp.gram, tol_rank);
  Mat x = f.x;  // r x m, x^dag x = gram
  if (gauge_mix != 0 && f.rank > 0) x = random_unitary(f.rank, gauge_mix) * x;
  const int r = f.rank;

  // coordinates of the class [v] for v in Ker eps: c(v) = x * (ker^+ v)
  Mat ker_pinv = pinv(ker);
  auto cls = [&](const Element& v) -> Vec { return x * (ker_pinv * v); };

  SchurmannTriple t;
  t.algebra = a.name;
  t.r = r;
  t.gamma = gamma;
  t.delta = Mat::Zero(r, d);
  for (int i = 0; i < d; ++i) {
    Element v = Element::Unit(d, i) - a.counit(i) * a.unit;
    t.delta.col(i) = cls(v);
  }
  // rho(e_i) on the spanning set {[b_j]}
  Mat span(r, m), target(r, m);
  t.rho.assign(d, Mat::Zero(r, r));
  for (int j = 0; j < m; ++j) span.col(j) = cls(ker.col(j));
  Mat span_pinv = pinv(span);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < m; ++j)
      target.col(j) = cls(multiply(a, Element(Element::Unit(d, i)),
                                   Element(ker.col(j))));
    t.rho[i] = target * span_pinv;
  }
  return t;
}

MatrixValuedMap triple_to_structure_map(const StarBialgebra& a,
                                        const SchurmannTriple& t) {
  const int d = a.dim;
  const int h = 1 + t.r;
  MatrixValuedMap phi;
  phi.algebra = a.name;
  phi.target_dim = h;
  phi.mats.assign(d, Mat::Zero(h, h));
  for (int i = 0; i < d; ++i) {
    Mat& m = phi.mats[i];
    m(0, 0) = t.gamma(i);
    Vec dstar = t.delta * a.involution.col(i);  // delta(e_i*)
    m.block(0, 1, 1, t.r) = dstar.adjoint();
    m.block(1, 0, t.r, 1) = t.delta.col(i);
    m.block(1, 1, t.r, t.r) =
        t.rho[i] - a.counit(i) * Mat::Identity(t.r, t.r);
  }
  return phi;
}

SchurmannTriple structure_map_to_triple(const StarBialgebra& a,
                                        const MatrixValuedMap& phi) {
  const int h = phi.target_dim;
  const int r = h - 1;
  SchurmannTriple t;
  t.algebra = phi.algebra;
  t.r = r;
  t.gamma = RowVec(a.dim);
  t.delta = Mat(r, a.dim);
  t.rho.assign(a.dim, Mat::Zero(r, r));
  for (int i = 0; i < a.dim; ++i) {
    t.gamma(i) = phi.mats[i](0, 0);
    t.delta.col(i) = phi.mats[i].block(1, 0, r, 1);
    t.rho[i] = phi.mats[i].block(1, 1, r, r) +
               a.counit(i) * Mat::Identity(r, r);
  }
  return t;
}

Report check_structure_relation(const StarBialgebra& a,
                                const MatrixValuedMap& phi, double tol) {
  Report rep;
  const int h = phi.target_dim;
  const Mat dqs = qs_projection(h);
  double rel = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    Element istar = a.involution.col(i);
    Mat phi_i_dag = phi.mats[i].adjoint();
    for (int j = 0; j < a.dim; ++j) {
      Mat lhs = phi.apply(multiply(a, istar, Element(Element::Unit(a.dim, j))));
      Mat rhs = phi_i_dag * a.counit(j) +
                std::conj(a.counit(i)) * phi.mats[j] +
                phi_i_dag * dqs * phi.mats[j];
      rel = std::max(rel, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  rep.add("structure_relation", rel, tol);
  double real_res = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    Mat lhs = phi.apply(a.involution.col(i));
    real_res = std::max(real_res,
                        (lhs - phi.mats[i].adjoint()).cwiseAbs().maxCoeff());
  }
  rep.add("reality", real_res, tol);
  rep.add("vanishes_at_unit", phi.apply(a.unit).cwiseAbs().maxCoeff(), tol);
  return rep;
}

Report check_triple(const StarBialgebra& a, const SchurmannTriple& t,
                    double tol) {
  Report rep;
  const int d = a.dim;
  const Mat id = Mat::Identity(t.r, t.r);
  rep.add("rho_unital", (t.rho_of(a.unit) - id).cwiseAbs().maxCoeff(), tol);
  double rho_mult = 0.0, rho_star = 0.0, deriv = 0.0, gamma_def = 0.0;
  for (int i = 0; i < d; ++i) {
    rho_star = std::max(rho_star, (t.rho_of(a.involution.col(i)) -
                                   t.rho[i].adjoint())
                                      .cwiseAbs()
                                      .maxCoeff());
    for (int j = 0; j < d; ++j) {
      Element prod = a.mult[i].row(j).transpose();
      rho_mult = std::max(rho_mult,
                          (t.rho_of(prod) - t.rho[i] * t.rho[j])
                              .cwiseAbs()
                              .maxCoeff());
      Vec lhs = t.delta * prod;
      Vec rhs = t.delta.col(i) * a.counit(j) + t.rho[i] * t.delta.col(j);
      double dmax = t.r ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0;
      deriv = std::max(deriv, dmax);
      // gamma(a* b) = conj gamma(a) eps(b) + conj eps(a) gamma(b) + delta(a)^dag delta(b)
      Element istar = a.involution.col(i);
      Cx g_lhs = (t.gamma * multiply(a, istar, Element(Element::Unit(d, j))))(0);
      Cx g_rhs = std::conj(t.gamma(i)) * a.counit(j) +
                 std::conj(a.counit(i)) * t.gamma(j) +
                 (t.delta.col(i).adjoint() * t.delta.col(j))(0);
      gamma_def = std::max(gamma_def, std::abs(g_lhs - g_rhs));
    }
  }
  rep.add("rho_multiplicative", rho_mult, tol);
  rep.add("rho_star", rho_star, tol);
  rep.add("delta_derivation", deriv, tol);
  rep.add("gamma_defect", gamma_def, tol);
  rep.add("gamma_real", functional_reality_residual(a, t.gamma), tol);
  rep.add("gamma_at_unit", std::abs((t.gamma * a.unit)(0)), tol);
  return rep;
}

InnerVector find_implementing_vector(const StarBialgebra& a,
                                     const std::vector<Mat>& rho,
                                     const Mat& delta) {
  const int d = a.dim;
  const int r = static_cast<int>(delta.rows());
  InnerVector out;
  if (r == 0) {
    out.xi = Vec(0);
    return out;
  }
  Mat sys(d * r, r);
  Vec rhs(d * r);
  for (int i = 0; i < d; ++i) {
    sys.block(i * r, 0, r, r) = rho[i] - a.counit(i) * Mat::Identity(r, r);
    rhs.segment(i * r, r) = delta.col(i);
  }
  out.xi = pinv(sys) * rhs;
  out.residual = (sys * out.xi - rhs).norm();
  return out;
}

CpcTuple cpc_standard_form(const StarBialgebra& a, const MatrixValuedMap& phi,
                           double tol, unsigned gauge_mix) {
  const int d = a.dim;
  const int h = phi.target_dim;
  const int nk = h - 1;
  // preconditions: reality and phi(1) <= 0
  double real_res = 0.0;
  for (int i = 0; i < d; ++i)
    real_res = std::max(real_res, (phi.apply(a.involution.col(i)) -
                                   phi.mats[i].adjoint())
                                      .cwiseAbs()
                                      .maxCoeff());
  if (real_res > tol)
    throw std::invalid_argument("cpc_standard_form: phi is not real");
  Mat phi1 = phi.apply(a.unit);
  if (max_hermitian_eigenvalue(phi1) > tol)
    throw std::invalid_argument("cpc_standard_form: phi(1) is not <= 0");

  // block maps: lambda (scalar), eta (lower-left column), sigma = block + eps I
  auto lambda_of = [&](const Element& x) { return phi.apply(x)(0, 0); };
  auto eta_of = [&](const Element& x) -> Vec {
    return phi.apply(x).block(1, 0, nk, 1);
  };
  auto etad_of = [&](const Element& x) -> RowVec {
    return phi.apply(x).block(0, 1, 1, nk);
  };
  auto sigma_of = [&](const Element& x) -> Mat {
    return phi.apply(x).block(1, 1, nk, nk) +
           a.eps(x) * Mat::Identity(nk, nk);
  };

  // nonnegative-definite kernel psi(e_i, e_j), assembled into the big Gram
  // over basis ox hat-basis
  const int big = d * h;
  Mat big_gram(big, big);
  for (int i = 0; i < d; ++i) {
    Element istar = a.involution.col(i);
    Cx eps_istar = a.eps(istar);
    for (int j = 0; j < d; ++j) {
      Element ej = Element::Unit(d, j);
      Element prod = multiply(a, istar, ej);
      Mat blockm(h, h);
      Cx dl = lambda_of(prod) - eps_istar * lambda_of(ej) -
              lambda_of(istar) * a.counit(j) +
              eps_istar * lambda_of(a.unit) * a.counit(j);
      blockm(0, 0) = dl;
      blockm.block(0, 1, 1, nk) = etad_of(prod) - eps_istar * etad_of(ej);
      blockm.block(1, 0, nk, 1) = eta_of(prod) - eta_of(istar) * a.counit(j);
      blockm.block(1, 1, nk, nk) = sigma_of(prod);
      big_gram.block(i * h, j * h, h, h) = blockm;
    }
  }
  double herm = (big_gram - big_gram.adjoint()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, big_gram.cwiseAbs().maxCoeff());
  if (herm > tol * scale)
    throw std::invalid_argument("cpc_standard_form: kernel is not Hermitian");
  PsdFactor f = psd_factor(big_gram, 1e-9);
  if (f.min_eigenvalue < -tol * scale)
    throw std::invalid_argument(
        "cpc_standard_form: kernel is not PSD (phi is not a CPC generator)");
  Mat x = f.x;  // K x big
  if (gauge_mix != 0 && f.rank > 0) x = random_unitary(f.rank, gauge_mix) * x;
  const int kk = f.rank;

  // chi(e_j) = [delta(e_j)  g(e_j)] with columns read off the factorisation
  std::vector<Mat> chi(d);
  for (int j = 0; j < d; ++j) chi[j] = x.block(0, j * h, kk, h);
  auto chi_of = [&](const Element& v) -> Mat {
    Mat out = Mat::Zero(kk, h);
    for (int j = 0; j < d; ++j) out += v(j) * chi[j];
    return out;
  };

  CpcTuple tup;
  tup.algebra = a.name;
  tup.k_dim = kk;
  tup.noise_dim = nk;
  Mat delta(kk, d);
  for (int j = 0; j < d; ++j) delta.col(j) = chi[j].col(0);

  // rho on the spanning set: all columns of all chi(e_j)
  Mat span(kk, big), target(kk, big);
  for (int j = 0; j < d; ++j)
    span.block(0, j * h, kk, h) = chi[j];
  Mat span_pinv = pinv(span);
  tup.rho.assign(d, Mat::Zero(kk, kk));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Element prod = multiply(a, Element(Element::Unit(d, i)),
                              Element(Element::Unit(d, j)));
      Mat chi_prod = chi_of(prod);
      // rho(e_i)(delta(e_j)) = delta(e_i e_j) - delta(e_i) eps(e_j)
      target.block(0, j * h, kk, 1) =
          chi_prod.col(0) - delta.col(i) * a.counit(j);
      // rho(e_i)(g(e_j) c) = g(e_i e_j) c
      target.block(0, j * h + 1, kk, nk) = chi_prod.block(0, 1, kk, nk);
    }
    tup.rho[i] = target * span_pinv;
  }

  // D = g(1)
  Mat g_unit = Mat::Zero(kk, nk);
  for (int j = 0; j < d; ++j)
    g_unit += a.unit(j) * chi[j].block(0, 1, kk, nk);
  tup.d_op = g_unit;

  tup.xi = find_implementing_vector(a, tup.rho, delta).xi;
  tup.t = phi1(0, 0).real();
  tup.d_vec = phi1.block(1, 0, nk, 1);

  Mat gap = Mat::Identity(nk, nk) - tup.d_op.adjoint() * tup.d_op;
  Mat root = psd_sqrt(gap);
  tup.e_vec = pinv(root, 1e-9) * tup.d_vec;  // minimum-norm solution
  Eigen::VectorXd gap_eigs = hermitian_eigenvalues(gap);
  tup.e_nullspace_dim = 0;
  for (Eigen::Index i = 0; i < gap_eigs.size(); ++i)
    if (gap_eigs(i) < 1e-9 * std::max(1.0, gap_eigs.cwiseAbs().maxCoeff()))
      ++tup.e_nullspace_dim;

  // contracts of the tuple
  if (operator_norm(tup.d_op) > 1.0 + tol)
    throw std::runtime_error("cpc_standard_form: D is not a contraction");
  if ((root * tup.e_vec - tup.d_vec).norm() > tol)
    throw std::runtime_error(
        "cpc_standard_form: d is not in the range of (I - D^dag D)^{1/2}");
  if (tup.e_vec.squaredNorm() > -tup.t + tol)
    throw std::runtime_error("cpc_standard_form: |e|^2 exceeds -t");

  MatrixValuedMap rebuilt = cpc_tuple_to_map(a, tup);
  double rt = 0.0;
  for (int i = 0; i < d; ++i)
    rt = std::max(rt,
                  (rebuilt.mats[i] - phi.mats[i]).cwiseAbs().maxCoeff());
  if (rt > tol)
    throw std::runtime_error(
        "cpc_standard_form: round trip through the block form failed, residual " +
        std::to_string(rt));
  return tup;
}

MatrixValuedMap cpc_tuple_to_map(const StarBialgebra& a, const CpcTuple& tup) {
  const int d = a.dim;
  const int nk = tup.noise_dim;
  const int h = 1 + nk;
  MatrixValuedMap phi;
  phi.algebra = a.name;
  phi.target_dim = h;
  phi.mats.assign(d, Mat::Zero(h, h));
  const double xi2 = tup.xi.squaredNorm();
  auto rho_of = [&](const Element& x) -> Mat {
    Mat out = Mat::Zero(tup.k_dim, tup.k_dim);
    for (int k = 0; k < d; ++k) out += x(k) * tup.rho[k];
    return out;
  };
  auto delta_of = [&](const Element& x) -> Vec {
    return rho_of(x) * tup.xi - a.eps(x) * tup.xi;
  };
  for (int i = 0; i < d; ++i) {
    Element ei = Element::Unit(d, i);
    Mat& m = phi.mats[i];
    m(0, 0) = a.counit(i) * (tup.t - xi2);
    if (tup.k_dim) m(0, 0) += (tup.xi.adjoint() * tup.rho[i] * tup.xi)(0);
    Vec lower = a.counit(i) * tup.d_vec;
    RowVec upper = a.counit(i) * tup.d_vec.adjoint();
    if (tup.k_dim) {
      lower += tup.d_op.adjoint() * delta_of(ei);
      // delta^dag(e_i) = delta(e_i*)^dag
      upper += delta_of(a.involution.col(i)).adjoint() * tup.d_op;
    }
    m.block(1, 0, nk, 1) = lower;
    m.block(0, 1, 1, nk) = upper;
    Mat srho = tup.k_dim ? Mat(tup.d_op.adjoint() * tup.rho[i] * tup.d_op)
                         : Mat::Zero(nk, nk);
    m.block(1, 1, nk, nk) = srho - a.counit(i) * Mat::Identity(nk, nk);
  }
  return phi;
}

Report check_cpc_form(const StarBialgebra& a, const MatrixValuedMap& phi,
                      double tol) {
  Report rep;
  const int h = phi.target_dim;
  const int nk = h - 1;
  Mat phi1 = phi.apply(a.unit);
  rep.add("phi(1) <= 0", std::max(0.0, max_hermitian_eigenvalue(phi1)), tol);
  CpcTuple tup;
  try {
    tup = cpc_standard_form(a, phi, tol);
  } catch (const std::exception& ex) {
    rep.add_flag(std::string("standard_form: ") + ex.what(), false);
    return rep;
  }
  // chi from the tuple, psi = S^dag rho(.) S with S = [xi D]
  Vec chi_vec(h);
  chi_vec(0) = 0.5 * (tup.xi.squaredNorm() - tup.t);
  chi_vec.segment(1, nk) = tup.d_op.adjoint() * tup.xi - tup.d_vec;
  Mat s(tup.k_dim, h);
  if (tup.k_dim) {
    s.col(0) = tup.xi;
    s.block(0, 1, tup.k_dim, nk) = tup.d_op;
  }
  Mat dqs = qs_projection(h);
  Mat rank2 = Mat::Zero(h, h);
  rank2.col(0) += chi_vec;
  rank2.row(0) += chi_vec.adjoint();
  double decomp = 0.0;
  Mat corr = dqs + rank2;
  std::vector<Mat> psi(a.dim);
  for (int i = 0; i < a.dim; ++i) {
    Mat rho_i = tup.k_dim ? tup.rho[i] : Mat::Zero(0, 0);
    psi[i] = tup.k_dim ? Mat(s.adjoint() * rho_i * s) : Mat::Zero(h, h);
    Mat want = phi.mats[i] + a.counit(i) * corr;
    decomp = std::max(decomp, (psi[i] - want).cwiseAbs().maxCoeff());
  }
  rep.add("psi_equals_Sdag_rho_S", decomp, tol);
  // complete positivity of psi via the Gram kernel psi(e_i* e_j)
  Mat big(a.dim * h, a.dim * h);
  for (int i = 0; i < a.dim; ++i) {
    Element istar = a.involution.col(i);
    for (int j = 0; j < a.dim; ++j) {
      Element prod = multiply(a, istar, Element(Element::Unit(a.dim, j)));
      Mat val = Mat::Zero(h, h);
      for (int k = 0; k < a.dim; ++k) val += prod(k) * psi[k];
      big.block(i * h, j * h, h, h) = val;
    }
  }
  double min_eig = min_hermitian_eigenvalue(big);
  rep.add("psi_completely_positive", std::max(0.0, -min_eig), tol);
  return rep;
}

}  // namespace qlevy
