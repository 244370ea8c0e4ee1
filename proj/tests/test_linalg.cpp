#include <doctest.h>

#include "qlevy/linalg.hpp"

using namespace qlevy;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("kron dimensions and values") {
  Mat a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  Mat k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == Cx(1, 0));
  CHECK(k(0, 0) == Cx(0, 0));
  CHECK(k(2, 3) == Cx(4, 0));
  CHECK(k(2, 1) == Cx(3, 0));
}

TEST_CASE("expm matches hand results") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  Mat e = expm(d);
  CHECK(std::abs(e(0, 0) - Cx(std::exp(1.0), 0)) < 1e-13);
  CHECK(std::abs(e(1, 1) - Cx(std::exp(-1.0), 0)) < 1e-13);
  // nilpotent block: exp([[0,1],[0,0]]) = [[1,1],[0,1]]
  Mat n = Mat::Zero(2, 2);
  n(0, 1) = 1.0;
  Mat en = expm(n);
  CHECK(std::abs(en(0, 1) - Cx(1, 0)) < 1e-14);
  CHECK(std::abs(en(1, 0)) < 1e-14);
}

TEST_CASE("psd_factor reproduces the matrix") {
  Mat g(2, 2);
  g << 2, 1, 1, 2;
  PsdFactor f = psd_factor(g);
  CHECK(f.rank == 2);
  CHECK((f.x.adjoint() * f.x - g).cwiseAbs().maxCoeff() < 1e-12);
  // rank-1 case
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 4.0;
  PsdFactor f1 = psd_factor(h);
  CHECK(f1.rank == 1);
  CHECK((f1.x.adjoint() * f1.x - h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor slot permutation moves slots") {
  // swap two slots of C^2 ox C^2
  Mat p = tensor_slot_permutation(2, {1, 0});
  Vec e0 = Vec::Zero(2), e1 = Vec::Zero(2);
  e0(0) = 1;
  e1(1) = 1;
  Vec v = kron_vec(e0, e1);  // e0 ox e1
  Vec w = p * v;
  CHECK((w - kron_vec(e1, e0)).cwiseAbs().maxCoeff() < 1e-15);
  Mat r = tensor_reversal(2, 3);
  Vec u = kron_vec(kron_vec(e0, e0), e1);
  CHECK((r * u - kron_vec(kron_vec(e1, e0), e0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("pinv solves consistent systems") {
  Mat a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Vec b(3);
  b << 1, 2, 3;
  Vec x = pinv(a) * b;
  CHECK((a * x - b).norm() < 1e-12);
}

TEST_CASE("dense budget guard throws") {
  CHECK_THROWS_AS(check_dense_budget(kMaxDenseEntries + 1, "test"),
                  std::length_error);
  std::vector<int> perm(40);
  for (int i = 0; i < 40; ++i) perm[i] = i;
  CHECK_THROWS_AS(tensor_slot_permutation(3, perm), std::length_error);
}

TEST_SUITE_END();
