#include "qlevy/perturbation.hpp"

#include "qlevy/bialgebra.hpp"

namespace qlevy {

Mat qs_delta(int hat_dim) {
  Mat d = Mat::Identity(hat_dim, hat_dim);
  d(0, 0) = 0.0;
  return d;
}

HatOperator diamond(const HatOperator& l, const HatOperator& m) {
  if (l.rows() != m.rows() || l.cols() != m.cols())
    throw std::invalid_argument("diamond: size mismatch");
  return l + m + l * qs_delta(static_cast<int>(l.rows())) * m;
}

HatOperator weyl_generator(const EuclideanElement& e, double tol) {
  const int r = static_cast<int>(e.v.size());
  if (e.big_v.rows() != r || e.big_v.cols() != r)
    throw std::invalid_argument("weyl_generator: dimension mismatch");
  if ((e.big_v.adjoint() * e.big_v - Mat::Identity(r, r)).cwiseAbs().maxCoeff() >
      tol)
    throw std::invalid_argument("weyl_generator: V is not unitary");
  HatOperator l = Mat::Zero(r + 1, r + 1);
  l(0, 0) = Cx(-0.5 * e.v.squaredNorm(), e.mu);
  l.block(0, 1, 1, r) = -(e.v.adjoint() * e.big_v);
  l.block(1, 0, r, 1) = e.v;
  l.block(1, 1, r, r) = e.big_v - Mat::Identity(r, r);
  return l;
}

EuclideanElement euclidean_product(const EuclideanElement& e1,
                                   const EuclideanElement& e2) {
  EuclideanElement out;
  out.mu = e1.mu + e2.mu -
           std::imag((e1.v.adjoint() * (e1.big_v * e2.v))(0));
  out.v = e1.v + e1.big_v * e2.v;
  out.big_v = e1.big_v * e2.big_v;
  return out;
}

IsometryFlags is_isometric_generator(const HatOperator& l, double tol) {
  IsometryFlags out;
  out.iso_residual = diamond(l.adjoint(), l).cwiseAbs().maxCoeff();
  out.coiso_residual = diamond(l, l.adjoint()).cwiseAbs().maxCoeff();
  out.isometric = out.iso_residual <= tol;
  out.coisometric = out.coiso_residual <= tol;
  return out;
}

MatrixValuedMap diamond_conjugate(const StarBialgebra& a,
                                  const MatrixValuedMap& phi,
                                  const std::optional<HatOperator>& l,
                                  const std::optional<HatOperator>& m) {
  const int h = phi.target_dim;
  const Mat dqs = qs_delta(h);
  const Mat id = Mat::Identity(h, h);
  if (l && (l->rows() != h || l->cols() != h))
    throw std::invalid_argument("diamond_conjugate: left size mismatch");
  if (m && (m->rows() != h || m->cols() != h))
    throw std::invalid_argument("diamond_conjugate: right size mismatch");
  MatrixValuedMap out;
  out.algebra = phi.algebra;
  out.target_dim = h;
  out.mats.assign(a.dim, Mat::Zero(h, h));
  // constant part: L, M, or L diamond M when both act
  Mat constant = Mat::Zero(h, h);
  if (l && m)
    constant = diamond(*l, *m);
  else if (l)
    constant = *l;
  else if (m)
    constant = *m;
  for (int i = 0; i < a.dim; ++i) {
    Mat v = phi.mats[i];
    if (l) v = (id + (*l) * dqs) * v;
    if (m) v = v * (id + dqs * (*m));
    out.mats[i] = v + a.counit(i) * constant;
  }
  return out;
}

SchurmannTriple euclidean_action(const StarBialgebra& a,
                                 const SchurmannTriple& t,
                                 const EuclideanElement& e) {
  if (static_cast<int>(e.v.size()) != t.r)
    throw std::invalid_argument("euclidean_action: dimension mismatch");
  SchurmannTriple out;
  out.algebra = t.algebra;
  out.r = t.r;
  const int d = a.dim;
  out.gamma = RowVec(d);
  out.delta = Mat(t.r, d);
  out.rho.assign(d, Mat::Zero(t.r, t.r));
  const Mat id = Mat::Identity(t.r, t.r);
  for (int i = 0; i < d; ++i) {
    Mat rho_eps = t.rho[i] - a.counit(i) * id;
    Vec delta_istar = t.delta * a.involution.col(i);  // delta(e_i*)
    out.gamma(i) = t.gamma(i) + (delta_istar.adjoint() * e.v)(0) +
                   (e.v.adjoint() * t.delta.col(i))(0) +
                   (e.v.adjoint() * rho_eps * e.v)(0);
    out.delta.col(i) =
        e.big_v.adjoint() * (t.delta.col(i) + rho_eps * e.v);
    out.rho[i] = e.big_v.adjoint() * t.rho[i] * e.big_v;
  }
  return out;
}

GroupCocycleResult group_cocycle_generator(
    const std::vector<std::vector<int>>& group_table,
    const std::vector<double>& lambda, const std::vector<Vec>& xi,
    const std::vector<Mat>& u, double tol) {
  GroupCocycleResult out;
  StarBialgebra a = build_group_bialgebra(group_table);
  const int n = a.dim;
  if (static_cast<int>(lambda.size()) != n ||
      static_cast<int>(xi.size()) != n || static_cast<int>(u.size()) != n)
    throw std::invalid_argument("group_cocycle_generator: data size mismatch");
  const int nk = static_cast<int>(xi[0].size());

  Report& rep = out.report;
  double urep = 0.0, unit_res = 0.0;
  for (int g = 0; g < n; ++g) {
    unit_res = std::max(unit_res, (u[g].adjoint() * u[g] -
                                   Mat::Identity(nk, nk))
                                      .cwiseAbs()
                                      .maxCoeff());
    for (int h = 0; h < n; ++h)
      urep = std::max(
          urep, (u[g] * u[h] - u[group_table[g][h]]).cwiseAbs().maxCoeff());
  }
  rep.add("U_unitary", unit_res, tol);
  rep.add("U_representation", urep, tol);

  double coc = 0.0, lam_res = 0.0;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      coc = std::max(coc, (Vec(xi[group_table[g][h]] - xi[g] - u[g] * xi[h]))
                              .cwiseAbs()
                              .maxCoeff());
      double want = lambda[g] + lambda[h] -
                    std::imag((xi[g].adjoint() * (u[g] * xi[h]))(0));
      lam_res = std::max(lam_res,
                         std::abs(lambda[group_table[g][h]] - want));
    }
  rep.add("xi_cocycle", coc, tol);
  rep.add("lambda_cocycle", lam_res, tol);
  if (!rep.pass())
    throw std::invalid_argument(
        "group_cocycle_generator: cocycle conditions violated (" +
        [&rep] {
          std::string bad;
          for (const auto& e : rep.entries())
            if (!e.pass) bad += e.name + " ";
          return bad;
        }() +
        ")");

  out.psi.resize(n);
  for (int g = 0; g < n; ++g) {
    EuclideanElement e{lambda[g], xi[g], u[g]};
    out.psi[g] = weyl_generator(e, tol);
  }

  // diamond composition, reality against inverses, psi_e = 0
  int identity = 0;
  for (int g = 0; g < n; ++g) {
    bool is_id = true;
    for (int h = 0; h < n; ++h) is_id = is_id && group_table[g][h] == h;
    if (is_id) identity = g;
  }
  double drug = 0.0, real_res = 0.0;
  std::vector<int> inverse(n, 0);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (group_table[g][h] == identity) inverse[g] = h;
  for (int g = 0; g < n; ++g) {
    real_res = std::max(real_res, (out.psi[g].adjoint() - out.psi[inverse[g]])
                                      .cwiseAbs()
                                      .maxCoeff());
    for (int h = 0; h < n; ++h)
      drug = std::max(drug, (out.psi[group_table[g][h]] -
                             diamond(out.psi[g], out.psi[h]))
                                .cwiseAbs()
                                .maxCoeff());
  }
  rep.add("psi_diamond_composition", drug, tol);
  rep.add("psi_reality", real_res, tol);
  rep.add("psi_at_identity", out.psi[identity].cwiseAbs().maxCoeff(), tol);

  out.phi.algebra = a.name;
  out.phi.target_dim = nk + 1;
  out.phi.mats = out.psi;
  Report sr = check_structure_relation(a, out.phi, tol);
  for (const auto& e : sr.entries())
    rep.add("structure." + e.name, e.residual, e.tol);
  return out;
}

}  // namespace qlevy
