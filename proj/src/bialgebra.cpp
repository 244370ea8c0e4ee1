#include "qlevy/bialgebra.hpp"

#include <algorithm>

namespace qlevy {
namespace {

Element basis_vector(int d, int i) {
  Element e = Element::Zero(d);
  e(i) = 1.0;
  return e;
}

double table_check(const std::vector<std::vector<int>>& table, int& identity) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw std::invalid_argument("empty multiplication table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("multiplication table is not square");
    for (int v : row)
      if (v < 0 || v >= n)
        throw std::invalid_argument("multiplication table entry out of range");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (table[table[i][j]][k] != table[i][table[j][k]])
          throw std::invalid_argument("multiplication table is not associative");
  identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int i = 0; i < n; ++i)
      ok = ok && table[e][i] == i && table[i][e] == i;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0)
    throw std::invalid_argument("multiplication table has no identity element");
  return 0.0;
}

bool table_is_group(const std::vector<std::vector<int>>& table, int identity,
                    std::vector<int>& inverse) {
  const int n = static_cast<int>(table.size());
  inverse.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (table[i][j] == identity && table[j][i] == identity) {
        inverse[i] = j;
        break;
      }
    }
    if (inverse[i] < 0) return false;
  }
  return true;
}

}  // namespace

Mat StarBialgebra::coproduct_matrix(const Element& x) const {
  Mat m = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (x(i) != Cx(0, 0)) m += x(i) * cop[i];
  return m;
}

Element multiply(const StarBialgebra& a, const Element& x, const Element& y) {
  if (x.size() != a.dim || y.size() != a.dim)
    throw std::invalid_argument("multiply: coordinate dimension mismatch");
  Element out = Element::Zero(a.dim);
  for (int i = 0; i < a.dim; ++i) {
    if (x(i) == Cx(0, 0)) continue;
    out += x(i) * (a.mult[i].transpose() * y);
  }
  return out;
}

DenseTensor iterated_coproduct(const StarBialgebra& a, const Element& x, int n) {
  if (n < 0) throw std::invalid_argument("iterated_coproduct: n < 0");
  check_dense_budget(ipow(a.dim, n + 1), "iterated_coproduct");
  DenseTensor t(a.dim, 1);
  for (int i = 0; i < a.dim; ++i) t.flat(i) = x(i);
  // Delta_k = (id^{ox k} ox Delta) o Delta_{k-1}: expand the last index.
  for (int k = 1; k <= n; ++k) {
    DenseTensor next(a.dim, k + 1);
    std::int64_t lead = t.size() / a.dim;
    for (std::int64_t p = 0; p < lead; ++p)
      for (int i = 0; i < a.dim; ++i) {
        Cx coeff = t.flat(p * a.dim + i);
        if (coeff == Cx(0, 0)) continue;
        for (int j = 0; j < a.dim; ++j)
          for (int l = 0; l < a.dim; ++l)
            next.flat((p * a.dim + j) * a.dim + l) += coeff * a.cop[i](j, l);
      }
    t = std::move(next);
  }
  return t;
}

double com_ij_residual(const StarBialgebra& a, int i, int j, int b) {
  DenseTensor lhs(a.dim, i + j + 2);
  const Mat dmat = a.cop[b];
  std::vector<DenseTensor> left(a.dim), right(a.dim);
  for (int p = 0; p < a.dim; ++p) {
    left[p] = iterated_coproduct(a, basis_vector(a.dim, p), i);
    right[p] = iterated_coproduct(a, basis_vector(a.dim, p), j);
  }
  const std::int64_t ls = left[0].size(), rs = right[0].size();
  for (int p = 0; p < a.dim; ++p)
    for (int q = 0; q < a.dim; ++q) {
      Cx coeff = dmat(p, q);
      if (coeff == Cx(0, 0)) continue;
      for (std::int64_t u = 0; u < ls; ++u) {
        Cx lu = coeff * left[p].flat(u);
        if (lu == Cx(0, 0)) continue;
        for (std::int64_t v = 0; v < rs; ++v)
          lhs.flat(u * rs + v) += lu * right[q].flat(v);
      }
    }
  DenseTensor rhs = iterated_coproduct(a, basis_vector(a.dim, b), i + j + 1);
  return lhs.max_abs_diff(rhs);
}

Report validate(const StarBialgebra& a, double tol) {
  Report rep;
  const int d = a.dim;

  double assoc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Element eij = a.mult[i].row(j).transpose();
      for (int l = 0; l < d; ++l) {
        Element lhs = multiply(a, eij, basis_vector(d, l));
        Element rhs =
            multiply(a, basis_vector(d, i),
                     multiply(a, basis_vector(d, j), basis_vector(d, l)));
        assoc = std::max(assoc, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    }
  rep.add("mult_associative", assoc, tol);

  double unit_res = 0.0;
  for (int i = 0; i < d; ++i) {
    Element e = basis_vector(d, i);
    unit_res = std::max(unit_res,
                        (multiply(a, a.unit, e) - e).cwiseAbs().maxCoeff());
    unit_res = std::max(unit_res,
                        (multiply(a, e, a.unit) - e).cwiseAbs().maxCoeff());
  }
  rep.add("unit", unit_res, tol);

  double coassoc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Cx lhs(0, 0), rhs(0, 0);
          for (int p = 0; p < d; ++p) {
            lhs += a.cop[i](p, l) * a.cop[p](jj, k);  // (Delta ox id) Delta
            rhs += a.cop[i](jj, p) * a.cop[p](k, l);  // (id ox Delta) Delta
          }
          coassoc = std::max(coassoc, std::abs(lhs - rhs));
        }
  rep.add("coassociativity", coassoc, tol);

  double counit_res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      Cx left(0, 0), right(0, 0);
      for (int j = 0; j < d; ++j) {
        left += a.counit(j) * a.cop[i](j, k);
        right += a.counit(j) * a.cop[i](k, j);
      }
      Cx want = (i == k) ? Cx(1, 0) : Cx(0, 0);
      counit_res = std::max({counit_res, std::abs(left - want),
                             std::abs(right - want)});
    }
  rep.add("counit_property", counit_res, tol);

  double eps_mult = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Cx lhs = (a.counit * a.mult[i].row(j).transpose())(0);
      eps_mult = std::max(eps_mult, std::abs(lhs - a.counit(i) * a.counit(j)));
    }
  rep.add("counit_multiplicative", eps_mult, tol);
  rep.add("counit_unital", std::abs(a.eps(a.unit) - Cx(1, 0)), tol);

  if (a.flags.coproduct_is_homomorphic) {
    double hom = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Mat lhs = a.coproduct_matrix(a.mult[i].row(j).transpose());
        Mat rhs = Mat::Zero(d, d);
        // Delta(e_i) Delta(e_j) in kron coordinates
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q) {
            Cx ci = a.cop[i](p, q);
            if (ci == Cx(0, 0)) continue;
            for (int s = 0; s < d; ++s)
              for (int t = 0; t < d; ++t) {
                Cx cj = ci * a.cop[j](s, t);
                if (cj == Cx(0, 0)) continue;
                Element ps = a.mult[p].row(s).transpose();
                Element qt = a.mult[q].row(t).transpose();
                for (int u = 0; u < d; ++u) {
                  if (ps(u) == Cx(0, 0)) continue;
                  rhs.row(u) += cj * ps(u) * qt.transpose();
                }
              }
          }
        hom = std::max(hom, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    rep.add("coproduct_homomorphic", hom, tol);
    Mat d1 = a.coproduct_matrix(a.unit);
    Mat want = a.unit * a.unit.transpose();
    rep.add("coproduct_unital", (d1 - want).cwiseAbs().maxCoeff(), tol);
  } else if (a.flags.is_hyper) {
    Mat d1 = a.coproduct_matrix(a.unit);
    Mat want = a.unit * a.unit.transpose();
    rep.add("coproduct_unital", (d1 - want).cwiseAbs().maxCoeff(), tol);
  }

  // Involution: involutive, antimultiplicative, coalgebra-compatible.
  rep.add("involution_involutive",
          (a.involution * a.involution.conjugate() - Mat::Identity(d, d))
              .cwiseAbs()
              .maxCoeff(),
          tol);
  double antimult = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Element lhs = a.star(a.mult[i].row(j).transpose());
      Element rhs = multiply(a, a.involution.col(j), a.involution.col(i));
      antimult = std::max(antimult, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  rep.add("involution_antimultiplicative", antimult, tol);
  double cop_star = 0.0;
  for (int i = 0; i < d; ++i) {
    Mat lhs = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) lhs += a.involution(j, i) * a.cop[j];
    Mat rhs = a.involution * a.cop[i].conjugate() * a.involution.transpose();
    cop_star = std::max(cop_star, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  rep.add("coproduct_star_compatible", cop_star, tol);
  double eps_star = 0.0;
  for (int i = 0; i < d; ++i)
    eps_star = std::max(eps_star,
                        std::abs((a.counit * a.involution.col(i))(0) -
                                 std::conj(a.counit(i))));
  rep.add("counit_star_compatible", eps_star, tol);

  if (a.antipode) {
    const Mat& s = *a.antipode;
    double ant = 0.0;
    for (int i = 0; i < d; ++i) {
      Element left = Element::Zero(d), right = Element::Zero(d);
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          Cx c = a.cop[i](j, k);
          if (c == Cx(0, 0)) continue;
          left += c * multiply(a, s.col(j), basis_vector(d, k));
          right += c * multiply(a, basis_vector(d, j), s.col(k));
        }
      Element want = a.counit(i) * a.unit;
      ant = std::max({ant, (left - want).cwiseAbs().maxCoeff(),
                      (right - want).cwiseAbs().maxCoeff()});
    }
    rep.add("antipode", ant, tol);
  }
  rep.add_flag("flags_hopf_consistent", a.flags.is_hopf == a.antipode.has_value());
  return rep;
}

StarBialgebra build_function_bialgebra(
    const std::vector<std::vector<int>>& table) {
  int e = -1;
  table_check(table, e);
  const int d = static_cast<int>(table.size());
  StarBialgebra a;
  a.name = "function_bialgebra_" + std::to_string(d);
  a.dim = d;
  for (int i = 0; i < d; ++i) a.basis_labels.push_back("delta" + std::to_string(i));
  a.mult.assign(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i) a.mult[i](i, i) = 1.0;  // pointwise product
  a.unit = Vec::Ones(d);
  a.cop.assign(d, Mat::Zero(d, d));
  for (int u = 0; u < d; ++u)
    for (int v = 0; v < d; ++v) a.cop[table[u][v]](u, v) += 1.0;
  a.counit = RowVec::Zero(d);
  a.counit(e) = 1.0;
  a.involution = Mat::Identity(d, d);
  std::vector<int> inv;
  if (table_is_group(table, e, inv)) {
    Mat s = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) s(inv[i], i) = 1.0;
    a.antipode = s;
    a.flags.is_hopf = true;
  }
  a.flags.coproduct_is_homomorphic = true;
  a.canonical_rep.assign(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i) a.canonical_rep[i](i, i) = 1.0;
  return a;
}

StarBialgebra build_group_bialgebra(const std::vector<std::vector<int>>& table) {
  int e = -1;
  table_check(table, e);
  std::vector<int> inv;
  if (!table_is_group(table, e, inv))
    throw std::invalid_argument("build_group_bialgebra: table is not a group");
  const int d = static_cast<int>(table.size());
  StarBialgebra a;
  a.name = "group_bialgebra_" + std::to_string(d);
  a.dim = d;
  for (int i = 0; i < d; ++i) a.basis_labels.push_back("L" + std::to_string(i));
  a.mult.assign(d, Mat::Zero(d, d));
  for (int g = 0; g < d; ++g)
    for (int h = 0; h < d; ++h) a.mult[g](h, table[g][h]) = 1.0;
  a.unit = Vec::Zero(d);
  a.unit(e) = 1.0;
  a.cop.assign(d, Mat::Zero(d, d));
  for (int g = 0; g < d; ++g) a.cop[g](g, g) = 1.0;
  a.counit = RowVec::Ones(d);
  Mat s = Mat::Zero(d, d);
  for (int g = 0; g < d; ++g) s(inv[g], g) = 1.0;
  a.involution = s;
  a.antipode = s;
  a.flags.is_hopf = true;
  a.flags.coproduct_is_homomorphic = true;
  // left regular representation; unitary since rows permute
  a.canonical_rep.assign(d, Mat::Zero(d, d));
  for (int g = 0; g < d; ++g)
    for (int h = 0; h < d; ++h) a.canonical_rep[g](table[g][h], h) = 1.0;
  return a;
}

StarBialgebra build_trivial_bialgebra() {
  StarBialgebra a = build_function_bialgebra({{0}});
  a.name = "trivial";
  a.basis_labels = {"1"};
  return a;
}

StarBialgebra opposite(const StarBialgebra& a) {
  StarBialgebra o = a;
  o.name = a.name + "_opp";
  for (int i = 0; i < a.dim; ++i) o.cop[i] = a.cop[i].transpose();
  if (a.antipode) {
    // the coinverse of the co-opposite is the inverse of the original
    Mat s = *a.antipode;
    Eigen::FullPivLU<Mat> lu(s);
    if (lu.isInvertible()) {
      o.antipode = lu.inverse();
      o.flags.is_hopf = true;
    } else {
      o.antipode.reset();
      o.flags.is_hopf = false;
    }
  }
  return o;
}

DelsarteResult delsarte_construct(const StarBialgebra& a,
                                  const std::vector<Mat>& action, double tol) {
  if (action.empty())
    throw std::invalid_argument("delsarte_construct: empty action");
  DelsarteResult out;
  Report& rep = out.report;
  const int d = a.dim;

  double auto_res = 0.0;
  for (const Mat& g : action) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Element lhs = g * a.mult[i].row(j).transpose();
        Element rhs = multiply(a, g.col(i), g.col(j));
        auto_res = std::max(auto_res, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    auto_res = std::max(auto_res, (g * a.unit - a.unit).cwiseAbs().maxCoeff());
    auto_res = std::max(auto_res,
                        ((a.counit * g) - a.counit).cwiseAbs().maxCoeff());
    // (g ox g) Delta = Delta g
    for (int i = 0; i < d; ++i) {
      Mat lhs = Mat::Zero(d, d);
      for (int j = 0; j < d; ++j) lhs += g(j, i) * a.cop[j];
      Mat rhs = g * a.cop[i] * g.transpose();
      auto_res = std::max(auto_res, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    auto_res = std::max(
        auto_res,
        (g * a.involution - a.involution * g.conjugate()).cwiseAbs().maxCoeff());
  }
  rep.add("action_automorphisms", auto_res, tol);

  double closure = 0.0;
  for (const Mat& g : action)
    for (const Mat& h : action) {
      double best = std::numeric_limits<double>::infinity();
      for (const Mat& k : action)
        best = std::min(best, (g * h - k).cwiseAbs().maxCoeff());
      closure = std::max(closure, best);
    }
  rep.add("action_closed", closure, tol);
  if (!rep.pass())
    throw std::invalid_argument(
        "delsarte_construct: action is not a closed group of automorphisms");

  Mat p = Mat::Zero(d, d);
  for (const Mat& g : action) p += g;
  p /= static_cast<double>(action.size());
  out.projection = p;
  rep.add("projection_idempotent", (p * p - p).cwiseAbs().maxCoeff(), tol);

  // P-identities of the conditional expectation (with trailing P, which is
  // what the group average satisfies).
  double pid1 = 0.0, pid2 = 0.0;
  for (int i = 0; i < d; ++i) {
    Mat dp = a.coproduct_matrix(p.col(i));  // Delta P e_i in matrix form
    Mat pp = Mat::Zero(d, d);               // (P ox P) Delta e_i
    pp = p * a.cop[i] * p.transpose();
    Mat left = p * dp;         // (P ox id) Delta P
    Mat rightp = dp * p.transpose();  // (id ox P) Delta P
    pid1 = std::max(pid1, (left - pp).cwiseAbs().maxCoeff());
    pid2 = std::max(pid2, (rightp - pp).cwiseAbs().maxCoeff());
  }
  rep.add("p_identity_left", pid1, tol);
  rep.add("p_identity_right", pid2, tol);

  // Basis for Ran P.
  Eigen::ColPivHouseholderQR<Mat> qr(p);
  qr.setThreshold(1e-10);
  const int dprime = static_cast<int>(qr.rank());
  Mat q = qr.householderQ();
  Mat basis = q.leftCols(dprime);
  // project the columns to make them exactly P-invariant up to roundoff
  basis = p * basis;
  out.subalgebra_basis = basis;
  Mat basis_pinv = pinv(basis);

  auto to_sub = [&](const Element& x) -> Element { return basis_pinv * x; };

  StarBialgebra s;
  s.name = a.name + "_delsarte";
  s.dim = dprime;
  for (int i = 0; i < dprime; ++i)
    s.basis_labels.push_back("p" + std::to_string(i));
  s.mult.assign(dprime, Mat::Zero(dprime, dprime));
  double sub_closed = 0.0;
  for (int i = 0; i < dprime; ++i)
    for (int j = 0; j < dprime; ++j) {
      Element prod = multiply(a, basis.col(i), basis.col(j));
      Element c = to_sub(prod);
      sub_closed = std::max(sub_closed,
                            (basis * c - prod).cwiseAbs().maxCoeff());
      s.mult[i].row(j) = c.transpose();
    }
  rep.add("subalgebra_closed_mult", sub_closed, tol);
  s.unit = to_sub(a.unit);

  s.cop.assign(dprime, Mat::Zero(dprime, dprime));
  double sub_cop = 0.0;
  for (int i = 0; i < dprime; ++i) {
    Mat dmat = p * a.coproduct_matrix(basis.col(i)) * p.transpose();
    Mat c = basis_pinv * dmat * basis_pinv.transpose();
    sub_cop = std::max(sub_cop,
                       (basis * c * basis.transpose() - dmat).cwiseAbs().maxCoeff());
    s.cop[i] = c;
  }
  rep.add("subalgebra_closed_coproduct", sub_cop, tol);

  s.counit = RowVec(dprime);
  for (int i = 0; i < dprime; ++i) s.counit(i) = (a.counit * basis.col(i))(0);
  rep.add("counit_p_invariant",
          ((a.counit * p) - a.counit).cwiseAbs().maxCoeff(), tol);

  Mat sinv(dprime, dprime);
  for (int i = 0; i < dprime; ++i)
    sinv.col(i) = to_sub(a.star(basis.col(i)));
  s.involution = sinv;

  s.flags.is_hyper = true;
  // explicit multiplicativity test for the restricted coproduct
  s.flags.coproduct_is_homomorphic = true;
  {
    StarBialgebra probe = s;
    Report r2 = validate(probe, tol);
    const CheckEntry* hom = r2.find("coproduct_homomorphic");
    s.flags.coproduct_is_homomorphic = hom && hom->pass;
  }
  if (s.flags.coproduct_is_homomorphic) {
    AntipodeSolve sol = solve_antipode(s);
    if (sol.residual <= tol) {
      s.antipode = sol.antipode;
      s.flags.is_hopf = true;
    }
  }
  out.sub = s;
  return out;
}

std::optional<HaarResult> haar_state(const StarBialgebra& a, double tol) {
  const int d = a.dim;
  // unknown row vector h: invariance rows + normalisation h(1)=1
  Mat sys(2 * d * d + 1, d);
  Vec rhs = Vec::Zero(2 * d * d + 1);
  int r = 0;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      // sum_j c[i][j][k] h_j = h_i u_k   (left invariance)
      RowVec row = RowVec::Zero(d);
      for (int j = 0; j < d; ++j) row(j) += a.cop[i](j, k);
      row(i) -= a.unit(k);
      sys.row(r++) = row;
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      // sum_k c[i][j][k] h_k = h_i u_j   (right invariance)
      RowVec row = RowVec::Zero(d);
      for (int k = 0; k < d; ++k) row(k) += a.cop[i](j, k);
      row(i) -= a.unit(j);
      sys.row(r++) = row;
    }
  {
    RowVec row = RowVec::Zero(d);
    for (int i = 0; i < d; ++i) row(i) = a.unit(i);
    sys.row(r) = row;
    rhs(r) = 1.0;
  }
  Vec h = sys.colPivHouseholderQr().solve(rhs);
  double res = (sys * h - rhs).cwiseAbs().maxCoeff();
  if (res > tol) return std::nullopt;
  HaarResult out;
  out.state = h.transpose();
  out.invariance_residual = res;
  out.gram_min_eigenvalue =
      min_hermitian_eigenvalue(functional_gram(a, out.state));
  if (out.gram_min_eigenvalue < -tol) return std::nullopt;
  return out;
}

AntipodeSolve solve_antipode(const StarBialgebra& a) {
  const int d = a.dim;
  // unknowns S[p][j]; equations over (i, l) for both one-sided identities
  Mat sys = Mat::Zero(2 * d * d, d * d);
  Vec rhs = Vec::Zero(2 * d * d);
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < d; ++l) {
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          Cx c = a.cop[i](j, k);
          if (c == Cx(0, 0)) continue;
          for (int pp = 0; pp < d; ++pp) {
            sys(i * d + l, pp * d + j) += c * a.mult[pp](k, l);
            sys(d * d + i * d + l, pp * d + k) += c * a.mult[j](pp, l);
          }
        }
      rhs(i * d + l) = a.counit(i) * a.unit(l);
      rhs(d * d + i * d + l) = a.counit(i) * a.unit(l);
    }
  Vec sol = sys.colPivHouseholderQr().solve(rhs);
  AntipodeSolve out;
  out.antipode = Mat(d, d);
  for (int pp = 0; pp < d; ++pp)
    for (int j = 0; j < d; ++j) out.antipode(pp, j) = sol(pp * d + j);
  out.residual = (sys * sol - rhs).cwiseAbs().maxCoeff();
  return out;
}

Report check_unitary_corepresentation(
    const StarBialgebra& a, const std::vector<std::vector<Element>>& v,
    double tol) {
  if (!a.antipode)
    throw std::invalid_argument(
        "check_unitary_corepresentation: bialgebra has no antipode");
  const int n = static_cast<int>(v.size());
  Report rep;
  double cop_res = 0.0, eps_res = 0.0, ant_res = 0.0;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(v[i].size()) != n)
      throw std::invalid_argument("corepresentation matrix is not square");
    for (int j = 0; j < n; ++j) {
      Mat lhs = a.coproduct_matrix(v[i][j]);
      Mat rhs = Mat::Zero(a.dim, a.dim);
      for (int k = 0; k < n; ++k) rhs += v[i][k] * v[k][j].transpose();
      cop_res = std::max(cop_res, (lhs - rhs).cwiseAbs().maxCoeff());
      Cx want = (i == j) ? Cx(1, 0) : Cx(0, 0);
      eps_res = std::max(eps_res, std::abs(a.eps(v[i][j]) - want));
      Element sv = (*a.antipode) * v[i][j];
      Element wstar = a.star(v[j][i]);
      ant_res = std::max(ant_res, (sv - wstar).cwiseAbs().maxCoeff());
    }
  }
  rep.add("corep_coproduct", cop_res, tol);
  rep.add("corep_counit", eps_res, tol);
  rep.add("corep_antipode_unitarity", ant_res, tol);
  return rep;
}

Mat functional_gram(const StarBialgebra& a, const RowVec& phi) {
  const int d = a.dim;
  Mat g(d, d);
  for (int i = 0; i < d; ++i) {
    // e_i* = S_inv conj(e_i) = column i of the involution matrix
    Element istar = a.involution.col(i);
    for (int j = 0; j < d; ++j)
      g(i, j) = (phi * multiply(a, istar, Element(Element::Unit(d, j))))(0);
  }
  return g;
}

double functional_reality_residual(const StarBialgebra& a, const RowVec& phi) {
  double r = 0.0;
  for (int i = 0; i < a.dim; ++i)
    r = std::max(r, std::abs((phi * a.involution.col(i))(0) -
                             std::conj(phi(i))));
  return r;
}

bool is_cocommutative(const StarBialgebra& a, double tol) {
  for (int i = 0; i < a.dim; ++i)
    if ((a.cop[i] - a.cop[i].transpose()).cwiseAbs().maxCoeff() > tol)
      return false;
  return true;
}

double bialgebra_max_diff(const StarBialgebra& a, const StarBialgebra& b) {
  if (a.dim != b.dim) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    m = std::max(m, (a.mult[i] - b.mult[i]).cwiseAbs().maxCoeff());
    m = std::max(m, (a.cop[i] - b.cop[i]).cwiseAbs().maxCoeff());
  }
  m = std::max(m, (a.unit - b.unit).cwiseAbs().maxCoeff());
  m = std::max(m, (a.counit - b.counit).cwiseAbs().maxCoeff());
  m = std::max(m, (a.involution - b.involution).cwiseAbs().maxCoeff());
  if (a.antipode && b.antipode)
    m = std::max(m, (*a.antipode - *b.antipode).cwiseAbs().maxCoeff());
  else if (a.antipode.has_value() != b.antipode.has_value())
    return std::numeric_limits<double>::infinity();
  return m;
}

}  // namespace qlevy
