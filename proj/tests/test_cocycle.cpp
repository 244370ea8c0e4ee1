#include <doctest.h>

#include <thread>

#include "qlevy/cocycle.hpp"
#include "qlevy/perturbation.hpp"
#include "testutil.hpp"

using namespace qlevy;

namespace {

const double kSqrt2 = std::sqrt(2.0);

CocycleSpec z2_gns_spec() {
  StarBialgebra z2 = build_group_bialgebra(testutil::cyclic_table(2));
  RowVec gamma(2);
  gamma << 0, -1;
  return CocycleSpec::from_triple(z2, gns_reconstruct(z2, gamma));
}

CocycleSpec cz2_gns_spec() {
  StarBialgebra cz2 = build_function_bialgebra(testutil::cyclic_table(2));
  RowVec gamma(2);
  gamma << -1, 1;
  return CocycleSpec::from_triple(cz2, gns_reconstruct(cz2, gamma));
}

StepFunction two_step(int n_k, Cx c1, Cx c2, double t1, double t2) {
  StepFunction f;
  f.n_k = n_k;
  f.breakpoints = {0.0, t1, t2};
  Vec v1 = Vec::Constant(n_k, c1), v2 = Vec::Constant(n_k, c2);
  f.values = {v1, v2};
  f.validate();
  return f;
}

MatrixSumKernel random_kernel(int n_k, int n_max, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 0.6);
  MatrixSumKernel k;
  k.n_k = n_k;
  const int h = n_k + 1;
  for (int n = 0; n <= n_max; ++n) {
    std::int64_t dim = 1;
    for (int q = 0; q < n; ++q) dim *= h;
    Mat level(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c)
        level(r, c) = Cx(nd(gen), nd(gen));
    k.levels.push_back(level);
  }
  k.cert_c1 = 1.0;
  k.cert_c2 = 1.0;
  for (int n = 0; n <= n_max; ++n)
    k.cert_c1 = std::max(k.cert_c1, operator_norm(k.levels[n]));
  return k;
}

MatrixSumKernel unit_kernel(int n_k, int n_max) {
  MatrixSumKernel e;
  e.n_k = n_k;
  const int h = n_k + 1;
  e.levels.push_back(Mat::Identity(1, 1));
  for (int n = 1; n <= n_max; ++n) {
    std::int64_t dim = 1;
    for (int q = 0; q < n; ++q) dim *= h;
    e.levels.push_back(Mat::Zero(dim, dim));
  }
  e.cert_c1 = 1.0;
  e.cert_c2 = 1.0;
  return e;
}

}  // namespace

TEST_SUITE_BEGIN("cocycle");

TEST_CASE("step functions") {
  StepFunction f = two_step(1, Cx(1, 0), Cx(0, 2), 1.0, 2.0);
  CHECK((f.at(0.5) - Vec::Constant(1, Cx(1, 0))).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((f.at(1.5) - Vec::Constant(1, Cx(0, 2))).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK(f.at(2.5).cwiseAbs().maxCoeff() < 1e-15);  // zero beyond support

  StepFunction g = StepFunction::constant(Vec::Constant(1, Cx(0, 1)), 2.0);
  // <f,g> over [0,2): conj(1)(i) + conj(2i)(i) = i + 2
  Cx ip = step_inner_product(f, g, 2.0);
  CHECK(std::abs(ip - Cx(2, 1)) < 1e-14);

  StepFunction bad;
  bad.n_k = 1;
  bad.breakpoints = {0.0, 1.0, 0.5};
  bad.values = {Vec::Zero(1), Vec::Zero(1)};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("time reversal") {
  SUBCASE("constant functions are fixed") {
    StepFunction f = StepFunction::constant(Vec::Constant(1, Cx(1, -1)), 3.0);
    StepFunction r = time_reverse(f, 3.0);
    for (double u : {0.1, 1.7, 2.9})
      CHECK((r.at(u) - f.at(u)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("two intervals swap") {
    StepFunction f = two_step(1, Cx(1, 0), Cx(2, 0), 1.0, 2.0);
    StepFunction r = time_reverse(f, 2.0);
    CHECK(std::abs(r.at(0.5)(0) - Cx(2, 0)) < 1e-14);
    CHECK(std::abs(r.at(1.5)(0) - Cx(1, 0)) < 1e-14);
  }
  SUBCASE("reversal is an involution on the window") {
    StepFunction f = two_step(2, Cx(0.3, 1), Cx(-1, 0.2), 0.7, 1.9);
    StepFunction rr = time_reverse(time_reverse(f, 1.5), 1.5);
    for (double u : {0.1, 0.6, 0.8, 1.2, 1.45, 1.7})
      CHECK((rr.at(u) - f.at(u)).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("support ending before the window reflects to a leading gap") {
    StepFunction f = StepFunction::constant(Vec::Constant(1, Cx(1, 0)), 1.0);
    StepFunction r = time_reverse(f, 2.0);
    CHECK(r.at(0.5).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(r.at(1.5)(0) - Cx(1, 0)) < 1e-14);
  }
}

TEST_CASE("upsilon") {
  CocycleSpec spec = z2_gns_spec();
  Element l1 = Element::Unit(2, 1);
  SUBCASE("level zero is the counit") {
    Mat u0 = upsilon(spec, l1, 0);
    CHECK(std::abs(u0(0, 0) - Cx(1, 0)) < 1e-14);
  }
  SUBCASE("group-like elements give tensor powers") {
    Mat phi1 = spec.phi.mats[1];
    Mat u2 = upsilon(spec, l1, 2);
    CHECK((u2 - kron(phi1, phi1)).cwiseAbs().maxCoeff() < 1e-13);
    Mat u3f = upsilon(spec, l1, 3, /*flipped=*/true);
    CHECK((u3f - kron(kron(phi1, phi1), phi1)).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("recursive identity") {
    // upsilon_{n+1} = (upsilon_n ox phi) o Delta on a non-group-like algebra
    CocycleSpec s2 = cz2_gns_spec();
    const StarBialgebra& a = s2.algebra;
    for (int i = 0; i < 2; ++i) {
      Mat direct = upsilon(s2, Element(Element::Unit(2, i)), 3);
      Mat recur = Mat::Zero(8, 8);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          Cx c = a.cop[i](j, k);
          if (c == Cx(0, 0)) continue;
          recur += c * kron(upsilon(s2, Element(Element::Unit(2, j)), 2),
                            s2.phi.mats[k]);
        }
      CHECK((direct - recur).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("associated generators") {
  CocycleSpec spec = z2_gns_spec();
  SUBCASE("vacuum pair gives the Markov generator") {
    RowVec g = associated_generator(spec, Vec::Zero(1), Vec::Zero(1));
    CHECK(std::abs(g(0)) < 1e-14);
    CHECK(std::abs(g(1) - Cx(-1, 0)) < 1e-14);
  }
  SUBCASE("zero generator") {
    MatrixValuedMap zero;
    zero.algebra = spec.algebra.name;
    zero.target_dim = 2;
    zero.mats.assign(2, Mat::Zero(2, 2));
    CocycleSpec zspec = CocycleSpec::from_generator(spec.algebra, zero);
    RowVec g = associated_generator(zspec, Vec::Constant(1, Cx(1, 2)),
                                    Vec::Constant(1, Cx(-3, 1)));
    CHECK(g.cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("scalar-noise sandwich formula") {
    // gamma_{c,d}(L1) = -1 + sqrt(2)(d + conj(c)) - 2 conj(c) d on the
    // hand-gauged triple
    SchurmannTriple t;
    t.algebra = spec.algebra.name;
    t.r = 1;
    t.gamma = RowVec(2);
    t.gamma << 0, -1;
    t.delta = Mat::Zero(1, 2);
    t.delta(0, 1) = kSqrt2;
    t.rho = {Mat::Identity(1, 1), -Mat::Identity(1, 1)};
    CocycleSpec hand = CocycleSpec::from_triple(spec.algebra, t);
    Cx c(0.4, -0.3), d(1.2, 0.5);
    RowVec g = associated_generator(hand, Vec::Constant(1, c),
                                    Vec::Constant(1, d));
    Cx want = Cx(-1, 0) + kSqrt2 * (d + std::conj(c)) -
              2.0 * std::conj(c) * d;
    CHECK(std::abs(g(1) - want) < 1e-13);
  }
}

TEST_CASE("semigroup decomposition evaluation") {
  CocycleSpec spec = z2_gns_spec();
  Element l1 = Element::Unit(2, 1);
  SUBCASE("t = 0 returns the counit") {
    StepFunction z = StepFunction::zero(1);
    CHECK(std::abs(evaluate_semigroup_decomposition(spec, l1, z, z, 0.0) -
                   Cx(1, 0)) < 1e-14);
  }
  SUBCASE("vacuum matrix element is the Markov semigroup") {
    StepFunction z = StepFunction::zero(1);
    Cx v = evaluate_semigroup_decomposition(spec, l1, z, z, 1.0);
    CHECK(std::abs(v - Cx(std::exp(-1.0), 0)) < 1e-12);
  }
  SUBCASE("trivial bialgebra reproduces the explicit Weyl action") {
    StarBialgebra triv = build_trivial_bialgebra();
    Cx zz(-0.3, 0.4), beta(0.7, -0.1), dd(0.2, 0.9), rr(0.5, 0.6);
    MatrixValuedMap phi;
    phi.algebra = triv.name;
    phi.target_dim = 2;
    Mat l(2, 2);
    l << zz, beta, dd, rr - Cx(1, 0);
    phi.mats = {l};
    CocycleSpec tspec = CocycleSpec::from_generator(triv, phi);
    Element one = Element::Unit(1, 0);
    for (double t : {0.1, 0.5, 1.0}) {
      for (Cx c : {Cx(0, 0), Cx(1, -1), Cx(0.3, 0.2)}) {
        for (Cx e : {Cx(0, 0), Cx(-0.4, 0.8)}) {
          StepFunction f = StepFunction::constant(Vec::Constant(1, c), t);
          StepFunction g = StepFunction::constant(Vec::Constant(1, e), t);
          Cx got = evaluate_semigroup_decomposition(tspec, one, f, g, t);
          Cx want = std::exp(t * (zz + beta * e + std::conj(c) * dd +
                                  std::conj(c) * rr * e));
          CHECK(std::abs(got - want) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("guichardet evaluation") {
  CocycleSpec spec = z2_gns_spec();
  Element l1 = Element::Unit(2, 1);
  SUBCASE("level zero only") {
    MatrixSumKernel k = kernel_from_generator(spec, l1, 4);
    StepFunction f = StepFunction::constant(Vec::Constant(1, Cx(1, 0)), 1.0);
    GuichardetValue v = evaluate_guichardet(k, f, f, 1.0, 0);
    // only the F_0 term survives: e^{<f,f>} eps(L1)
    CHECK(std::abs(v.value - Cx(std::exp(1.0), 0)) < 1e-13);
    CHECK(v.tail_bound > 0.0);
  }
  SUBCASE("constant step functions collapse to the exp-star series") {
    Cx c(0.5, -0.2), d(-0.1, 0.3);
    double t = 0.3;
    StepFunction f = StepFunction::constant(Vec::Constant(1, c), t);
    StepFunction g = StepFunction::constant(Vec::Constant(1, d), t);
    MatrixSumKernel k = kernel_from_generator(spec, l1, 10);
    GuichardetValue v = evaluate_guichardet(k, f, g, t, 10);
    RowVec gamma = associated_generator(spec, Vec::Constant(1, c),
                                        Vec::Constant(1, d));
    Cx want = std::exp(step_inner_product(f, g, t)) *
              (exp_star(spec.algebra, gamma, t, ExpStarMethod::kSemigroup)
                   .functional *
               l1)(0);
    CHECK(std::abs(v.value - want) < v.tail_bound + 1e-10);
    CHECK(v.tail_bound < 1e-5);
  }
  SUBCASE("multi-interval tight agreement on a short window") {
    for (const CocycleSpec& s : {z2_gns_spec(), cz2_gns_spec()}) {
      StepFunction f = two_step(1, Cx(0.8, 0.1), Cx(-0.5, 0.4), 0.12, 0.3);
      StepFunction g = two_step(1, Cx(-0.2, 0.6), Cx(0.9, 0.0), 0.2, 0.3);
      for (int i = 0; i < s.algebra.dim; ++i) {
        Element x = Element::Unit(s.algebra.dim, i);
        MatrixSumKernel k = kernel_from_generator(s, x, 10);
        GuichardetValue v = evaluate_guichardet(k, f, g, 0.3, 10);
        Cx want = evaluate_semigroup_decomposition(s, x, f, g, 0.3);
        INFO(s.algebra.name << " basis " << i);
        CHECK(std::abs(v.value - want) <= v.tail_bound + 1e-8);
        CHECK(v.tail_bound < 5e-3);
        CHECK(std::abs(v.value - want) < 1e-5);
      }
    }
  }
  SUBCASE("slot ordering is validated on a non-cocommutative algebra") {
    // on cocommutative fixtures the flipped and unflipped kernels coincide;
    // a rank-2 generator mixing non-commuting group elements separates them
    StarBialgebra cs3 = build_function_bialgebra(testutil::s3_table());
    RowVec gamma = RowVec::Zero(6);
    gamma(1) = 1.0;  // a transposition
    gamma(4) = 1.0;  // a 3-cycle
    gamma(0) -= 2.0;
    CocycleSpec s = CocycleSpec::from_triple(cs3, gns_reconstruct(cs3, gamma));
    REQUIRE(s.n_k == 2);
    StepFunction f = two_step(2, Cx(0.9, 0.3), Cx(-0.5, 0.6), 0.04, 0.1);
    StepFunction g = two_step(2, Cx(-0.4, 0.2), Cx(1.0, -0.3), 0.07, 0.1);
    double worst_flip = 0, worst_noflip = 0;
    for (int i = 0; i < 6; ++i) {
      Element x = Element::Unit(6, i);
      MatrixSumKernel k = kernel_from_generator(s, x, 6);
      MatrixSumKernel noflip = k;
      for (int n = 0; n <= 6; ++n)
        noflip.levels[n] = upsilon(s, x, n, /*flipped=*/false);
      GuichardetValue v = evaluate_guichardet(k, f, g, 0.1, 6);
      GuichardetValue w = evaluate_guichardet(noflip, f, g, 0.1, 6);
      Cx want = evaluate_semigroup_decomposition(s, x, f, g, 0.1);
      CHECK(std::abs(v.value - want) <= v.tail_bound + 1e-8);
      worst_flip = std::max(worst_flip, std::abs(v.value - want));
      worst_noflip = std::max(worst_noflip, std::abs(w.value - want));
    }
    CHECK(worst_flip < 1e-6);
    CHECK(worst_noflip > 1e-4);  // the wrong convention is detected
  }
  SUBCASE("certified agreement at t = 1 with the default level") {
    for (const CocycleSpec& s : {z2_gns_spec(), cz2_gns_spec()}) {
      StepFunction f = two_step(1, Cx(0.4, 0.1), Cx(-0.3, 0.2), 0.4, 1.0);
      StepFunction g = two_step(1, Cx(-0.2, 0.3), Cx(0.5, 0.0), 0.7, 1.0);
      for (int i = 0; i < s.algebra.dim; ++i) {
        Element x = Element::Unit(s.algebra.dim, i);
        MatrixSumKernel k = kernel_from_generator(s, x, 6);
        GuichardetValue v = evaluate_guichardet(k, f, g, 1.0, 6);
        Cx want = evaluate_semigroup_decomposition(s, x, f, g, 1.0);
        INFO(s.algebra.name << " basis " << i);
        CHECK(std::abs(v.value - want) <= v.tail_bound + 1e-8);
      }
    }
  }
}

TEST_CASE("kernels without a valid certificate are rejected") {
  MatrixSumKernel k = random_kernel(1, 2, 971);
  k.cert_c1 = 0.0;
  k.cert_c2 = 0.0;
  StepFunction f = StepFunction::constant(Vec::Constant(1, Cx(1, 0)), 1.0);
  CHECK_THROWS_AS(evaluate_guichardet(k, f, f, 1.0, 2),
                  std::invalid_argument);
}

TEST_CASE("kernel from generator") {
  CocycleSpec spec = z2_gns_spec();
  SUBCASE("unit element gives the unit kernel") {
    MatrixSumKernel k = kernel_from_generator(spec, spec.algebra.unit, 3);
    CHECK(std::abs(k.levels[0](0, 0) - Cx(1, 0)) < 1e-14);
    for (int n = 1; n <= 3; ++n)
      CHECK(k.levels[n].cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("group-like tensor powers and certificate") {
    Element l1 = Element::Unit(2, 1);
    MatrixSumKernel k = kernel_from_generator(spec, l1, 3);
    Mat phi1 = spec.phi.mats[1];
    CHECK((k.levels[3] - kron(kron(phi1, phi1), phi1)).cwiseAbs().maxCoeff() <
          1e-12);
    for (int n = 0; n <= 3; ++n)
      CHECK(operator_norm(k.levels[n]) <=
            k.cert_c1 * std::pow(k.cert_c2, n) + 1e-9);
  }
}

TEST_CASE("kernel product") {
  SUBCASE("unit kernel is the identity") {
    MatrixSumKernel f = random_kernel(1, 3, 91);
    MatrixSumKernel e = unit_kernel(1, 3);
    MatrixSumKernel left = kernel_product(e, f, 3);
    MatrixSumKernel right = kernel_product(f, e, 3);
    for (int n = 0; n <= 3; ++n) {
      CHECK((left.levels[n] - f.levels[n]).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((right.levels[n] - f.levels[n]).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
  SUBCASE("level-one formula") {
    MatrixSumKernel f = random_kernel(2, 1, 92);
    MatrixSumKernel g = random_kernel(2, 1, 93);
    MatrixSumKernel prod = kernel_product(f, g, 1);
    Mat dqs = Mat::Identity(3, 3);
    dqs(0, 0) = 0.0;
    Mat want = f.levels[0](0, 0) * g.levels[1] +
               g.levels[0](0, 0) * f.levels[1] +
               f.levels[1] * dqs * g.levels[1];
    CHECK((prod.levels[1] - want).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("associativity on random kernels") {
    MatrixSumKernel f = random_kernel(1, 3, 94);
    MatrixSumKernel g = random_kernel(1, 3, 95);
    MatrixSumKernel h = random_kernel(1, 3, 96);
    MatrixSumKernel left = kernel_product(kernel_product(f, g, 3), h, 3);
    MatrixSumKernel right = kernel_product(f, kernel_product(g, h, 3), 3);
    for (int n = 0; n <= 3; ++n)
      CHECK((left.levels[n] - right.levels[n]).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("multiplicativity") {
  SUBCASE("GNS generators are weakly multiplicative") {
    for (const CocycleSpec& s : {z2_gns_spec(), cz2_gns_spec()}) {
      Report rep = check_multiplicative(s, 3, 1e-10);
      INFO(s.algebra.name);
      CHECK(rep.pass());
    }
  }
  SUBCASE("doubled delta block is detected at level one") {
    CocycleSpec spec = z2_gns_spec();
    CocycleSpec broken = spec;
    broken.phi.mats[1](1, 0) *= 2.0;
    broken.phi.mats[1](0, 1) *= 2.0;
    Report rep = check_multiplicative(broken, 1, 1e-10);
    CHECK_FALSE(rep.pass());
    // the level-one defect equals the structure-relation defect: 6 at (0,0)
    CHECK(rep.find("upsilon_multiplicative")->residual ==
          doctest::Approx(6.0).epsilon(1e-9));
  }
  SUBCASE("zero generator is multiplicative") {
    StarBialgebra cz3 = build_function_bialgebra(testutil::cyclic_table(3));
    MatrixValuedMap zero;
    zero.algebra = cz3.name;
    zero.target_dim = 3;
    zero.mats.assign(3, Mat::Zero(3, 3));
    Report rep =
        check_multiplicative(CocycleSpec::from_generator(cz3, zero), 2, 1e-10);
    CHECK(rep.pass());
  }
}

TEST_CASE("ito inner product") {
  CocycleSpec spec = z2_gns_spec();
  StepFunction f = two_step(1, Cx(0.3, 0.5), Cx(-0.2, 0.1), 0.5, 1.0);
  StepFunction g = two_step(1, Cx(0.7, -0.3), Cx(0.4, 0.2), 0.6, 1.0);
  SUBCASE("unit kernels give the exponential inner product") {
    MatrixSumKernel e = kernel_from_generator(spec, spec.algebra.unit, 4);
    Cx v = ito_inner_product(e, e, f, g, 1.0, 4);
    CHECK(std::abs(v - std::exp(step_inner_product(f, g, 1.0))) < 1e-12);
  }
  SUBCASE("weak multiplicativity of the homomorphic cocycle") {
    Element l1 = Element::Unit(2, 1);
    MatrixSumKernel k1 = kernel_from_generator(spec, l1, 4);
    // F^dag * F = upsilon-tilde(L1 L1) = the unit kernel level by level, so
    // <l(L1) eps(f), l(L1) eps(f)> = e^{<f,f>} exactly at any truncation
    Cx lhs = ito_inner_product(k1, k1, f, f, 1.0, 4);
    CHECK(std::abs(lhs - std::exp(step_inner_product(f, f, 1.0))) < 1e-10);
  }
  SUBCASE("the unit kernel is absorbed on the right") {
    Element l1 = Element::Unit(2, 1);
    MatrixSumKernel k1 = kernel_from_generator(spec, l1, 4);  // self-adjoint
    MatrixSumKernel e = kernel_from_generator(spec, spec.algebra.unit, 4);
    Cx via_product = ito_inner_product(k1, e, f, g, 1.0, 4);
    Cx direct = evaluate_guichardet(k1, f, g, 1.0, 4).value;
    CHECK(std::abs(via_product - direct) < 1e-12);
  }
}

TEST_CASE("cocycle identity under interval splitting") {
  for (const CocycleSpec& s : {z2_gns_spec(), cz2_gns_spec()}) {
    const StarBialgebra& a = s.algebra;
    StepFunction f = two_step(1, Cx(0.6, -0.1), Cx(-0.3, 0.8), 0.8, 1.5);
    StepFunction g = two_step(1, Cx(0.2, 0.4), Cx(1.0, -0.6), 0.5, 1.5);
    double split = 0.9, total = 1.5;
    for (int i = 0; i < a.dim; ++i) {
      // full product versus the split-and-convolve route
      MatrixValuedMap left = counit_map(a), right = counit_map(a);
      IntervalData first = merge_intervals(f, g, split);
      for (std::size_t q = 0; q < first.lengths.size(); ++q) {
        RowVec gm =
            associated_generator(s, first.f_values[q], first.g_values[q]);
        left = convolve(a, left,
                        MatrixValuedMap::from_functional(
                            a, exp_star(a, gm, first.lengths[q],
                                        ExpStarMethod::kSemigroup)
                                   .functional));
      }
      std::vector<double> pts{split, total};
      for (double b : f.breakpoints)
        if (b > split && b < total) pts.push_back(b);
      for (double b : g.breakpoints)
        if (b > split && b < total) pts.push_back(b);
      std::sort(pts.begin(), pts.end());
      for (std::size_t q = 0; q + 1 < pts.size(); ++q) {
        RowVec gm = associated_generator(s, f.at(pts[q]), g.at(pts[q]));
        right = convolve(a, right,
                         MatrixValuedMap::from_functional(
                             a, exp_star(a, gm, pts[q + 1] - pts[q],
                                         ExpStarMethod::kSemigroup)
                                    .functional));
      }
      Cx via_split =
          std::exp(step_inner_product(f, g, total)) *
          (convolve(a, left, right).functional() * Element::Unit(a.dim, i))(0);
      Cx full = evaluate_semigroup_decomposition(
          s, Element(Element::Unit(a.dim, i)), f, g, total);
      INFO(a.name << " basis " << i);
      CHECK(std::abs(via_split - full) < 1e-10);
    }
  }
}

TEST_CASE("fixed-point hyperbialgebra cocycles lift through the projection") {
  // a generator phi on the fixed-point algebra and psi = phi o P on the
  // ambient algebra produce the same matrix elements on fixed elements
  StarBialgebra cz3 = build_function_bialgebra(testutil::cyclic_table(3));
  Mat inv = Mat::Zero(3, 3);
  inv(0, 0) = 1;
  inv(2, 1) = 1;
  inv(1, 2) = 1;
  DelsarteResult dr = delsarte_construct(cz3, {Mat::Identity(3, 3), inv});
  const StarBialgebra& sub = dr.sub;

  // conditionally positive generator on the hyperbialgebra from its Haar state
  auto h = haar_state(sub);
  REQUIRE(h.has_value());
  RowVec gamma = h->state - sub.counit;
  SchurmannTriple t = gns_reconstruct(sub, gamma);
  CocycleSpec sub_spec = CocycleSpec::from_triple(sub, t);
  MatrixValuedMap phi = sub_spec.phi;

  // psi = phi o P on the ambient algebra
  Mat emb_pinv = pinv(dr.subalgebra_basis);
  MatrixValuedMap psi;
  psi.algebra = cz3.name;
  psi.target_dim = phi.target_dim;
  for (int i = 0; i < 3; ++i) {
    Vec sub_coords = emb_pinv * (dr.projection * Element::Unit(3, i));
    psi.mats.push_back(phi.apply(sub_coords));
  }
  CocycleSpec amb_spec = CocycleSpec::from_generator(cz3, psi);

  int nk = sub_spec.n_k;
  StepFunction f = two_step(nk, Cx(0.5, 0.2), Cx(-0.3, 0.4), 0.3, 1.0);
  StepFunction g = two_step(nk, Cx(-0.2, 0.6), Cx(0.7, -0.1), 0.6, 1.0);
  for (int i = 0; i < 3; ++i) {
    Element ambient = Element::Unit(3, i);
    Element fixed = dr.projection * ambient;
    Vec sub_coords = emb_pinv * fixed;
    Cx on_sub = evaluate_semigroup_decomposition(sub_spec, Vec(sub_coords),
                                                 f, g, 1.0);
    Cx on_ambient =
        evaluate_semigroup_decomposition(amb_spec, fixed, f, g, 1.0);
    INFO("basis " << i);
    CHECK(std::abs(on_sub - on_ambient) < 1e-10);
  }
}

TEST_CASE("markov semigroup of a generated cocycle obeys the semigroup law") {
  for (const CocycleSpec& spec : {z2_gns_spec(), cz2_gns_spec()}) {
    RowVec markov =
        associated_generator(spec, Vec::Zero(spec.n_k), Vec::Zero(spec.n_k));
    Report rep = check_semigroup_law(spec.algebra, markov, {0.3, 0.7, 1.1});
    INFO(spec.algebra.name);
    CHECK(rep.pass());
    CHECK(rep.max_residual() < 1e-9);
  }
}

TEST_CASE("adjoint symmetry of matrix elements") {
  // for a real generator, <eps(g), l(a*) eps(f)> = conj <eps(f), l(a) eps(g)>
  CocycleSpec spec = cz2_gns_spec();
  const StarBialgebra& a = spec.algebra;
  StepFunction f = two_step(1, Cx(0.4, 0.7), Cx(-0.6, 0.2), 0.3, 1.0);
  StepFunction g = two_step(1, Cx(-0.1, 0.9), Cx(0.8, -0.5), 0.6, 1.0);
  for (int i = 0; i < a.dim; ++i) {
    Element x = Element::Unit(a.dim, i);
    Element xstar = a.involution.col(i);
    Cx direct = evaluate_semigroup_decomposition(spec, x, f, g, 1.0);
    Cx swapped = evaluate_semigroup_decomposition(spec, xstar, g, f, 1.0);
    CHECK(std::abs(swapped - std::conj(direct)) < 1e-11);
  }
}

TEST_CASE("generator recovery from finite differences") {
  CocycleSpec spec = z2_gns_spec();
  Element l1 = Element::Unit(2, 1);
  Vec c = Vec::Constant(1, Cx(0.6, -0.2));
  Vec d = Vec::Constant(1, Cx(-0.3, 0.4));
  RowVec gamma = associated_generator(spec, c, d);
  Cx want = (gamma * l1)(0);
  std::vector<double> errs;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    StepFunction f = StepFunction::constant(c, t);
    StepFunction g = StepFunction::constant(d, t);
    Cx num = evaluate_semigroup_decomposition(spec, l1, f, g, t);
    Cx eps_term = spec.algebra.eps(l1) * std::exp(t * (c.adjoint() * d)(0));
    Cx quotient = (num - eps_term) / t;
    errs.push_back(std::abs(quotient - want));
  }
  // first-order convergence: log-log slope across the decades
  double slope1 = std::log10(errs[0] / errs[1]);
  double slope2 = std::log10(errs[1] / errs[2]);
  CHECK(slope1 == doctest::Approx(1.0).epsilon(0.1));
  CHECK(slope2 == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("evaluation is safe under concurrent invocation") {
  // operations are pure over immutable values; a shared spec evaluated from
  // several threads must reproduce the serial table exactly
  CocycleSpec spec = cz2_gns_spec();
  StepFunction f = two_step(1, Cx(0.4, 0.1), Cx(-0.2, 0.5), 0.4, 1.0);
  StepFunction g = two_step(1, Cx(-0.3, 0.2), Cx(0.6, -0.4), 0.7, 1.0);
  std::vector<double> times{0.25, 0.5, 0.75, 1.0};
  std::vector<Cx> serial;
  for (double t : times)
    for (int i = 0; i < 2; ++i)
      serial.push_back(evaluate_semigroup_decomposition(
          spec, Element(Element::Unit(2, i)), f, g, t));
  std::vector<Cx> parallel(serial.size());
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < times.size(); ++w)
    workers.emplace_back([&, w] {
      for (int i = 0; i < 2; ++i)
        parallel[w * 2 + i] = evaluate_semigroup_decomposition(
            spec, Element(Element::Unit(2, i)), f, g, times[w]);
    });
  for (auto& th : workers) th.join();
  for (std::size_t q = 0; q < serial.size(); ++q)
    CHECK(std::abs(serial[q] - parallel[q]) == 0.0);
}

TEST_CASE("opposite evaluation") {
  SUBCASE("cocommutative bialgebras are insensitive") {
    CocycleSpec spec = z2_gns_spec();
    StepFunction f = two_step(1, Cx(0.5, 0.1), Cx(-0.4, 0.3), 0.4, 1.0);
    StepFunction g = two_step(1, Cx(0.2, -0.6), Cx(0.7, 0.4), 0.8, 1.0);
    Element l1 = Element::Unit(2, 1);
    Cx lhs = evaluate_opposite(spec, l1, f, g, 1.0);
    Cx rhs = evaluate_semigroup_decomposition(spec, l1, f, g, 1.0);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  SUBCASE("non-cocommutative: opposite algebra and time reversal agree") {
    StarBialgebra cs3 = build_function_bialgebra(testutil::s3_table());
    RowVec gamma = testutil::random_cp_generator(cs3, 321);
    CocycleSpec spec =
        CocycleSpec::from_triple(cs3, gns_reconstruct(cs3, gamma));
    StarBialgebra op = opposite(cs3);
    MatrixValuedMap phi_op = spec.phi;
    phi_op.algebra = op.name;
    CocycleSpec spec_op = CocycleSpec::from_generator(op, phi_op);
    int nk = spec.n_k;
    StepFunction f = two_step(nk, Cx(0.4, 0.2), Cx(-0.1, 0.5), 0.3, 1.0);
    StepFunction g = two_step(nk, Cx(-0.7, 0.1), Cx(0.2, -0.2), 0.6, 1.0);
    double worst1 = 0.0, worst2 = 0.0, sep = 0.0;
    for (int i = 0; i < cs3.dim; ++i) {
      Element x = Element::Unit(cs3.dim, i);
      Cx a1 = evaluate_opposite(spec, x, f, g, 1.0);
      Cx a2 = evaluate_semigroup_decomposition(spec_op, x, f, g, 1.0);
      Cx a3 = evaluate_semigroup_decomposition(
          spec, x, time_reverse(f, 1.0), time_reverse(g, 1.0), 1.0);
      Cx direct = evaluate_semigroup_decomposition(spec, x, f, g, 1.0);
      worst1 = std::max(worst1, std::abs(a1 - a2));
      worst2 = std::max(worst2, std::abs(a1 - a3));
      sep = std::max(sep, std::abs(a1 - direct));
    }
    CHECK(worst1 < 1e-10);
    CHECK(worst2 < 1e-10);
    CHECK(sep > 1e-6);  // genuinely different from the direct evaluation
  }
}

TEST_SUITE_END();
