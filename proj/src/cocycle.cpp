#include "qlevy/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qlevy {
namespace {

Vec hat(const Vec& c) {
  Vec h(c.size() + 1);
  h(0) = 1.0;
  h.segment(1, c.size()) = c;
  return h;
}

// merged breakpoint grid of f and g restricted to [0,t], including t
std::vector<double> merged_grid(const StepFunction& f, const StepFunction& g,
                                double t) {
  std::vector<double> pts{0.0, t};
  for (double b : f.breakpoints)
    if (b > 0.0 && b < t) pts.push_back(b);
  for (double b : g.breakpoints)
    if (b > 0.0 && b < t) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            pts.end());
  return pts;
}

}  // namespace

StepFunction StepFunction::zero(int n_k) {
  StepFunction f;
  f.n_k = n_k;
  f.breakpoints = {0.0};
  return f;
}

StepFunction StepFunction::constant(const Vec& c, double until) {
  StepFunction f;
  f.n_k = static_cast<int>(c.size());
  f.breakpoints = {0.0, until};
  f.values = {c};
  f.validate();
  return f;
}

void StepFunction::validate() const {
  if (breakpoints.empty() || breakpoints.front() != 0.0)
    throw std::invalid_argument("step function must start at t = 0");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw std::invalid_argument("breakpoints not strictly increasing");
  if (values.size() + 1 != breakpoints.size())
    throw std::invalid_argument("value count does not match breakpoints");
  for (const Vec& v : values)
    if (v.size() != n_k)
      throw std::invalid_argument("step value dimension mismatch");
}

Vec StepFunction::at(double u) const {
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j)
    if (u >= breakpoints[j] && u < breakpoints[j + 1]) return values[j];
  return Vec::Zero(n_k);
}

Cx step_inner_product(const StepFunction& f, const StepFunction& g, double t) {
  if (f.n_k != g.n_k)
    throw std::invalid_argument("step_inner_product: noise dimension mismatch");
  std::vector<double> pts = merged_grid(f, g, t);
  Cx acc(0, 0);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double len = pts[i + 1] - pts[i];
    Vec fv = f.at(pts[i]);
    Vec gv = g.at(pts[i]);
    acc += len * (fv.adjoint() * gv)(0);
  }
  return acc;
}

IntervalData merge_intervals(const StepFunction& f, const StepFunction& g,
                             double t) {
  IntervalData out;
  std::vector<double> pts = merged_grid(f, g, t);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.lengths.push_back(pts[i + 1] - pts[i]);
    out.f_values.push_back(f.at(pts[i]));
    out.g_values.push_back(g.at(pts[i]));
  }
  return out;
}

StepFunction time_reverse(const StepFunction& f, double t) {
  if (t < 0) throw std::invalid_argument("time_reverse: t < 0");
  StepFunction out;
  out.n_k = f.n_k;
  if (t == 0.0) return f;
  // decompose [0,t) along f's breakpoints, then mirror
  std::vector<double> pts{0.0, t};
  for (double b : f.breakpoints)
    if (b > 0.0 && b < t) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> rev_pts;
  std::vector<Vec> rev_vals;
  for (std::size_t i = pts.size(); i-- > 1;) {
    // interval [pts[i-1], pts[i]) maps to [t - pts[i], t - pts[i-1])
    rev_pts.push_back(t - pts[i]);
    rev_vals.push_back(f.at(pts[i - 1]));
  }
  out.breakpoints = rev_pts;
  out.values = rev_vals;
  out.breakpoints.push_back(t);
  // unchanged beyond t; the surviving pieces are contiguous from t
  for (std::size_t j = 0; j + 1 < f.breakpoints.size(); ++j) {
    double lo = std::max(f.breakpoints[j], t);
    double hi = f.breakpoints[j + 1];
    if (hi > lo + 1e-15) {
      out.values.push_back(f.values[j]);
      out.breakpoints.push_back(hi);
    }
  }
  out.validate();
  return out;
}

MatrixSumKernel MatrixSumKernel::adjoint() const {
  MatrixSumKernel out = *this;
  for (Mat& l : out.levels) l = l.adjoint().eval();
  return out;
}

CocycleSpec CocycleSpec::from_generator(const StarBialgebra& a,
                                        const MatrixValuedMap& phi) {
  CocycleSpec s;
  s.algebra = a;
  s.phi = phi;
  s.n_k = phi.target_dim - 1;
  if (static_cast<int>(phi.mats.size()) != a.dim)
    throw std::invalid_argument("CocycleSpec: generator dimension mismatch");
  return s;
}

CocycleSpec CocycleSpec::from_triple(const StarBialgebra& a,
                                     const SchurmannTriple& t) {
  return from_generator(a, triple_to_structure_map(a, t));
}

Mat upsilon(const CocycleSpec& spec, const Element& x, int n, bool flipped) {
  if (n < 0) throw std::invalid_argument("upsilon: n < 0");
  const StarBialgebra& a = spec.algebra;
  const int h = spec.n_k + 1;
  if (n == 0) {
    Mat out(1, 1);
    out(0, 0) = a.eps(x);
    return out;
  }
  check_dense_budget(ipow(h, n) * ipow(h, n), "upsilon");
  // recursion upsilon_{m+1} = (upsilon_m ox phi) o Delta over basis elements
  std::vector<Mat> cur(a.dim);
  for (int i = 0; i < a.dim; ++i) cur[i] = spec.phi.mats[i];
  for (int m = 1; m < n; ++m) {
    std::vector<Mat> next(a.dim);
    const std::int64_t dim = ipow(h, m + 1);
    for (int i = 0; i < a.dim; ++i) next[i] = Mat::Zero(dim, dim);
    for (int i = 0; i < a.dim; ++i)
      for (int j = 0; j < a.dim; ++j)
        for (int k = 0; k < a.dim; ++k) {
          Cx c = a.cop[i](j, k);
          if (c == Cx(0, 0)) continue;
          next[i] += c * kron(cur[j], spec.phi.mats[k]);
        }
    cur = std::move(next);
  }
  Mat out = Mat::Zero(cur[0].rows(), cur[0].cols());
  for (int i = 0; i < a.dim; ++i)
    if (x(i) != Cx(0, 0)) out += x(i) * cur[i];
  if (flipped && n > 1) {
    Mat rev = tensor_reversal(h, n);
    out = rev * out * rev;
  }
  return out;
}

RowVec associated_generator(const CocycleSpec& spec, const Vec& c, const Vec& d) {
  if (c.size() != spec.n_k || d.size() != spec.n_k)
    throw std::invalid_argument("associated_generator: noise dimension mismatch");
  Vec ch = hat(c), dh = hat(d);
  RowVec gamma(spec.algebra.dim);
  for (int i = 0; i < spec.algebra.dim; ++i)
    gamma(i) = (ch.adjoint() * spec.phi.mats[i] * dh)(0);
  return gamma;
}

Cx evaluate_semigroup_decomposition(const CocycleSpec& spec, const Element& x,
                                    const StepFunction& f,
                                    const StepFunction& g, double t) {
  if (t < 0) throw std::invalid_argument("evaluate: t < 0");
  const StarBialgebra& a = spec.algebra;
  if (t == 0.0) return a.eps(x);
  IntervalData iv = merge_intervals(f, g, t);
  MatrixValuedMap prod = counit_map(a);
  bool first = true;
  for (std::size_t i = 0; i < iv.lengths.size(); ++i) {
    RowVec gamma = associated_generator(spec, iv.f_values[i], iv.g_values[i]);
    RowVec lam =
        exp_star(a, gamma, iv.lengths[i], ExpStarMethod::kSemigroup).functional;
    MatrixValuedMap lam_map = MatrixValuedMap::from_functional(a, lam);
    // earliest interval pairs with the first Sweedler leg
    prod = first ? lam_map : convolve(a, prod, lam_map);
    first = false;
  }
  Cx scalar = (prod.functional() * x)(0);
  return std::exp(step_inner_product(f, g, t)) * scalar;
}

Cx evaluate_opposite(const CocycleSpec& spec, const Element& x,
                     const StepFunction& f, const StepFunction& g, double t) {
  if (t < 0) throw std::invalid_argument("evaluate_opposite: t < 0");
  const StarBialgebra& a = spec.algebra;
  if (t == 0.0) return a.eps(x);
  IntervalData iv = merge_intervals(f, g, t);
  MatrixValuedMap prod = counit_map(a);
  bool first = true;
  for (std::size_t i = 0; i < iv.lengths.size(); ++i) {
    RowVec gamma = associated_generator(spec, iv.f_values[i], iv.g_values[i]);
    RowVec lam =
        exp_star(a, gamma, iv.lengths[i], ExpStarMethod::kSemigroup).functional;
    MatrixValuedMap lam_map = MatrixValuedMap::from_functional(a, lam);
    // latest interval pairs with the first Sweedler leg
    prod = first ? lam_map : convolve(a, lam_map, prod);
    first = false;
  }
  Cx scalar = (prod.functional() * x)(0);
  return std::exp(step_inner_product(f, g, t)) * scalar;
}

GuichardetValue evaluate_guichardet(const MatrixSumKernel& f_kernel,
                                    const StepFunction& f,
                                    const StepFunction& g, double t,
                                    int n_max) {
  if (f_kernel.levels.empty())
    throw std::invalid_argument("evaluate_guichardet: kernel has no data");
  for (int n = 0; n <= f_kernel.n_max(); ++n) {
    double bound = f_kernel.cert_c1 * std::pow(f_kernel.cert_c2, n);
    double slack = bound * (1.0 + 1e-9) + 1e-12;
    if (operator_norm_upper_bound(f_kernel.levels[n]) <= slack) continue;
    if (operator_norm(f_kernel.levels[n]) > slack)
      throw std::invalid_argument(
          "evaluate_guichardet: growth certificate missing or violated");
  }
  int top = f_kernel.n_max();
  if (n_max >= 0) top = std::min(top, n_max);
  IntervalData iv = merge_intervals(f, g, t);
  const int m = static_cast<int>(iv.lengths.size());

  std::vector<Vec> fhat(m), ghat(m);
  double mf = 1.0, mg = 1.0;  // max hat-vector norms (>= 1 from the 1-slot)
  for (int j = 0; j < m; ++j) {
    fhat[j] = hat(iv.f_values[j]);
    ghat[j] = hat(iv.g_values[j]);
    mf = std::max(mf, fhat[j].norm());
    mg = std::max(mg, ghat[j].norm());
  }

  Cx series(0, 0);
  // occupation counts (n_1..n_m); latest interval occupies the first slots
  std::vector<int> occ(std::max(m, 1), 0);
  auto term_vectors = [&](int n) -> Cx {
    Cx level_acc(0, 0);
    std::function<void(int, int, double)> rec = [&](int j, int remaining,
                                                    double weight) {
      if (j == m - 1) {
        occ[j] = remaining;
        double w = weight;
        for (int q = 1; q <= remaining; ++q) w *= iv.lengths[j] / q;
        Vec vf(1), vg(1);
        vf(0) = 1.0;
        vg(0) = 1.0;
        for (int p = m - 1; p >= 0; --p)
          for (int q = 0; q < occ[p]; ++q) {
            vf = kron_vec(vf, fhat[p]);
            vg = kron_vec(vg, ghat[p]);
          }
        level_acc += w * (vf.adjoint() * f_kernel.levels[n] * vg)(0);
        return;
      }
      for (int take = 0; take <= remaining; ++take) {
        occ[j] = take;
        double w = weight;
        for (int q = 1; q <= take; ++q) w *= iv.lengths[j] / q;
        rec(j + 1, remaining - take, w);
      }
    };
    if (m == 0) return n == 0 ? Cx(f_kernel.levels[0](0, 0)) : Cx(0, 0);
    rec(0, n, 1.0);
    return level_acc;
  };

  for (int n = 0; n <= top; ++n) {
    if (n == 0) {
      series += f_kernel.levels[0](0, 0);
      continue;
    }
    series += term_vectors(n);
  }

  GuichardetValue out;
  Cx ip = step_inner_product(f, g, t);
  out.value = std::exp(ip) * series;
  // tail over n > top: C1 sum (t C2 Mf Mg)^n / n! <= C1 e^x x^{top+1}/(top+1)!
  double xx = t * f_kernel.cert_c2 * mf * mg;
  double tail = f_kernel.cert_c1 * std::exp(xx);
  for (int q = 1; q <= top + 1; ++q) tail *= xx / q;
  out.tail_bound = std::exp(std::abs(ip)) * tail;
  return out;
}

MatrixSumKernel kernel_from_generator(const CocycleSpec& spec, const Element& x,
                                      int n_max) {
  MatrixSumKernel k;
  k.n_k = spec.n_k;
  const int h = spec.n_k + 1;
  check_dense_budget(ipow(h, n_max) * ipow(h, n_max), "kernel_from_generator");
  for (int n = 0; n <= n_max; ++n)
    k.levels.push_back(upsilon(spec, x, n, /*flipped=*/true));

  // growth certificate from the recursion upsilon_{n+1} = (upsilon_n ox phi)
  // o Delta: with W[i][j] = sum_k |c[i][j][k]| |phi(e_k)| the level norms on
  // basis elements satisfy nu_{n+1} <= W nu_n entrywise, so
  // |F_n(x)| <= |x|_1 |nu_1|_inf |W|_inf^{n-1}.
  const StarBialgebra& a = spec.algebra;
  Eigen::MatrixXd w(a.dim, a.dim);
  Eigen::VectorXd nu1(a.dim);
  for (int i = 0; i < a.dim; ++i)
    nu1(i) = operator_norm(spec.phi.mats[i]);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      double s = 0.0;
      for (int kk = 0; kk < a.dim; ++kk)
        s += std::abs(a.cop[i](j, kk)) * nu1(kk);
      w(i, j) = s;
    }
  double w_inf = 0.0;
  for (int i = 0; i < a.dim; ++i) w_inf = std::max(w_inf, w.row(i).sum());
  double xnorm = x.cwiseAbs().sum();
  k.cert_c2 = w_inf;
  k.cert_c1 = std::abs(a.eps(x));
  if (w_inf > 0)
    k.cert_c1 = std::max(k.cert_c1, xnorm * nu1.maxCoeff() / w_inf);
  // the certificate must dominate the stored levels
  for (int n = 0; n <= n_max; ++n) {
    double bound = k.cert_c1 * std::pow(k.cert_c2, n);
    double slack = bound * (1.0 + 1e-9) + 1e-12;
    if (operator_norm_upper_bound(k.levels[n]) <= slack) continue;
    if (operator_norm(k.levels[n]) > slack)
      throw std::runtime_error("kernel_from_generator: certificate violated");
  }
  return k;
}

MatrixSumKernel kernel_product(const MatrixSumKernel& f,
                               const MatrixSumKernel& g, int n_max) {
  if (f.n_k != g.n_k)
    throw std::invalid_argument("kernel_product: noise dimension mismatch");
  if (n_max > f.n_max() || n_max > g.n_max())
    throw std::invalid_argument("kernel_product: n_max exceeds stored levels");
  const int h = f.hat_dim();
  check_dense_budget(ipow(h, n_max) * ipow(h, n_max), "kernel_product");
  MatrixSumKernel out;
  out.n_k = f.n_k;

  Mat dqs = Mat::Identity(h, h);
  dqs(0, 0) = 0.0;

  // Pi_{sel;n}^dag (base ox I) Pi_{sel;n} via explicit slot permutations
  auto embed = [&](const Mat& base, const std::vector<int>& sel, int n) -> Mat {
    const int kcount = static_cast<int>(sel.size());
    std::vector<int> perm(n);
    std::vector<bool> in_sel(n, false);
    int pos = 0;
    for (int s : sel) {
      perm[s] = pos++;
      in_sel[s] = true;
    }
    for (int s = 0; s < n; ++s)
      if (!in_sel[s]) perm[s] = pos++;
    Mat pi = tensor_slot_permutation(h, perm);
    const std::int64_t rest = ipow(h, n - kcount);
    Mat big = kron(base, Mat::Identity(rest, rest));
    return pi.adjoint() * big * pi;
  };

  for (int n = 0; n <= n_max; ++n) {
    const std::int64_t dim = ipow(h, n);
    Mat level = Mat::Zero(dim, dim);
    // enumerate the 3^n disjoint partitions by slot assignment:
    // 1 -> alpha_1 (F only), 2 -> alpha_2 (both), 3 -> alpha_3 (G only)
    std::vector<int> assign(n, 1);
    while (true) {
      std::vector<int> fa, ga;
      Mat overlap = Mat::Identity(1, 1);
      for (int s = 0; s < n; ++s) {
        if (assign[s] != 3) fa.push_back(s);
        if (assign[s] != 1) ga.push_back(s);
        overlap = kron(overlap, assign[s] == 2 ? dqs : Mat::Identity(h, h));
      }
      level += embed(f.levels[fa.size()], fa, n) * overlap *
               embed(g.levels[ga.size()], ga, n);
      int s = 0;
      for (; s < n; ++s) {
        if (assign[s] < 3) {
          ++assign[s];
          std::fill(assign.begin(), assign.begin() + s, 1);
          break;
        }
      }
      if (s == n) break;
    }
    out.levels.push_back(level);
  }
  out.cert_c1 = f.cert_c1 * g.cert_c1;
  out.cert_c2 = f.cert_c2 + g.cert_c2 + f.cert_c2 * g.cert_c2;
  return out;
}

Report check_multiplicative(const CocycleSpec& spec, int n_max, double tol) {
  Report rep;
  const StarBialgebra& a = spec.algebra;
  std::vector<MatrixSumKernel> basis_kernels(a.dim);
  for (int i = 0; i < a.dim; ++i)
    basis_kernels[i] =
        kernel_from_generator(spec, Element(Element::Unit(a.dim, i)), n_max);
  double worst = 0.0;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      Element prod = a.mult[i].row(j).transpose();
      MatrixSumKernel lhs = kernel_from_generator(spec, prod, n_max);
      MatrixSumKernel rhs =
          kernel_product(basis_kernels[i], basis_kernels[j], n_max);
      for (int n = 0; n <= n_max; ++n)
        worst = std::max(
            worst, (lhs.levels[n] - rhs.levels[n]).cwiseAbs().maxCoeff());
    }
  rep.add("upsilon_multiplicative", worst, tol);
  // equivalent generator-level relation (without the involution):
  // phi(ab) = phi(a) eps(b) + eps(a) phi(b) + phi(a) Dqs phi(b)
  const int h = spec.n_k + 1;
  Mat dqs = Mat::Identity(h, h);
  dqs(0, 0) = 0.0;
  double rel = 0.0;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      Mat lhs = spec.phi.apply(a.mult[i].row(j).transpose());
      Mat rhs = spec.phi.mats[i] * a.counit(j) +
                a.counit(i) * spec.phi.mats[j] +
                spec.phi.mats[i] * dqs * spec.phi.mats[j];
      rel = std::max(rel, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  rep.add("generator_relation", rel, tol);
  // the unital *-homomorphic version, for cross-reference only (a dilated
  // generator is multiplicative without vanishing at the unit)
  Report sr = check_structure_relation(a, spec.phi, tol);
  for (const auto& e : sr.entries())
    rep.add_info("structure." + e.name, e.residual, e.tol);
  return rep;
}

Cx ito_inner_product(const MatrixSumKernel& f_kernel,
                     const MatrixSumKernel& g_kernel, const StepFunction& f,
                     const StepFunction& g, double t, int n_max) {
  MatrixSumKernel prod = kernel_product(f_kernel.adjoint(), g_kernel, n_max);
  return evaluate_guichardet(prod, f, g, t, n_max).value;
}

}  // namespace qlevy
