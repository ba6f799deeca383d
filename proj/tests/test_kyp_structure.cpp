// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <doctest.h>
#include "phem/bench_io.hpp"
#include "phem/error.hpp"
#include "phem/gramians.hpp"
#include "phem/kyp.hpp"
#include "phem/structure.hpp"
#include "test_util.hpp"

using namespace phem;
using namespace phem::test;

namespace
{

Matrix scalar(double v)
{
  return Matrix::Constant(1, 1, v);
}

Eigen::Index krylov_rank(const Matrix &A, const Matrix &B)
{
  const Eigen::Index n = A.rows(), m = B.cols();
  Matrix K(n, n * m);
  Matrix blk = B;
  for (Eigen::Index k = 0; k < n; ++k)
  {
    K.middleCols(k * m, m) = blk;
    blk = A * blk;
  }
  Eigen::JacobiSVD<Matrix> svd(K);
  const Vector s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > 1e-9 * s(0))
  {
    ++r;
  }
  return r;
}

}  // namespace

TEST_CASE("kyp_matrix")
{
  const LtiSystem rom = *gen_reference_example(ReferenceExample::Ex5_1).rom_lti;
  for (double q : {0.5, 1.0, 160.0 / 169.0})
  {
    Matrix W(2, 2);
    W << 4 * q, 6 - 6 * q, 6 - 6 * q, 2;
    CHECK(max_abs_diff(kyp_matrix(rom, scalar(q)), W) < 1e-14);
  }

  Rng rng(31);
  const LtiSystem sys(random_stable(3, rng), randn(3, 2, rng), randn(2, 3, rng),
                      Matrix::Zero(2, 2));
  const Matrix W0 = kyp_matrix(sys, Matrix::Zero(3, 3));
  CHECK(W0.topLeftCorner(3, 3).norm() == 0.0);
  CHECK(W0.bottomRightCorner(2, 2).norm() == 0.0);
  CHECK(max_abs_diff(W0.topRightCorner(3, 2), sys.C.transpose()) == 0.0);
  const Matrix W = kyp_matrix(sys, random_spd(3, rng));
  CHECK((W - W.transpose()).norm() < 1e-14 * W.norm());
}

TEST_CASE("is_feasible on the printed interval")
{
  const LtiSystem rom = *gen_reference_example(ReferenceExample::Ex5_1).rom_lti;
  CHECK(is_feasible(rom, scalar(160.0 / 169.0)).feasible);
  CHECK(is_feasible(rom, scalar(10.0 / 9.0)).feasible);
  CHECK_FALSE(is_feasible(rom, scalar(3.0)).feasible);
  CHECK_FALSE(is_feasible(rom, scalar(0.1)).feasible);
}

TEST_CASE("extremal_solutions")
{
  struct Case
  {
    ReferenceExample which;
    double lo, hi;
  };
  for (const Case &c : {Case{ReferenceExample::Ex5_6, 0.75, 4.0 / 3.0},
                        Case{ReferenceExample::Ex5_5, 0.5, 2.0},
                        Case{ReferenceExample::Ex5_1, 10.0 / 9.0 - std::sqrt(76.0) / 18.0,
                             10.0 / 9.0 + std::sqrt(76.0) / 18.0}})
  {
    const auto [lo, hi] = extremal_solutions(*gen_reference_example(c.which).rom_lti);
    CHECK(std::abs(lo.X(0, 0) - c.lo) < 1e-12);
    CHECK(std::abs(hi.X(0, 0) - c.hi) < 1e-12);
  }

  Rng rng(32);
  for (int trial = 0; trial < 5; ++trial)
  {
    const LtiSystem sys = ph_to_lti(random_ph(5, 2, rng));
    const KypCertificate mid = strictly_feasible_solution(sys);
    CHECK(mid.min_eig_W > 0.0);
    CHECK(min_eigenvalue(kyp_matrix(sys, mid.X)) > 0.0);
  }
}

TEST_CASE("is_passive")
{
  const ExampleData e41 = gen_reference_example(ReferenceExample::Ex4_1);
  const PassivityReport pr = is_passive(*e41.rom_lti);
  CHECK(pr.passive);
  // the regularizing feedthrough eps moves the solution by O(sqrt(eps))
  CHECK(std::abs(pr.certificate.X(0, 0) - 1.0) <
        5.0 * std::sqrt(pr.certificate.feedthrough_eps));
  CHECK(pr.certificate.feedthrough_eps > 0.0);

  const LtiSystem unstable(scalar(1), scalar(1), scalar(1), scalar(1));
  CHECK_FALSE(is_passive(unstable).passive);

  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial)
  {
    CHECK(is_passive(ph_to_lti(random_ph(6, 2, rng))).passive);
  }
  // a stable system that is not positive real
  const LtiSystem neg(scalar(-1), scalar(1), scalar(-3), scalar(1));
  CHECK_FALSE(is_passive(neg).passive);
}

TEST_CASE("remove_unobservable_hamiltonian")
{
  PhSystem ph(Matrix::Zero(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2),
              Matrix::Ones(2, 1), Matrix::Zero(2, 1), scalar(1), scalar(0));
  ph.Q(0, 0) = 1.0;
  CHECK(remove_unobservable_hamiltonian(ExtendedPhSystem(ph)).n() == 1);

  Rng rng(34);
  const ExtendedPhSystem pd(random_ph(4, 2, rng));
  const ExtendedPhSystem same = remove_unobservable_hamiltonian(pd);
  CHECK(same.n() == 4);
  CHECK(max_abs_diff(same.ph.Q, pd.ph.Q) == 0.0);

  for (int trial = 0; trial < 5; ++trial)
  {
    const ExtendedPhSystem sys(synthetic_ph({2, 1, 2, 1}, 2, rng));
    const ExtendedPhSystem red = remove_unobservable_hamiltonian(sys);
    CHECK(red.n() == 3);
    CHECK(validate_ph(red.ph).ok());
    CHECK(h2_dist_extended(sys, red) < 1e-8);
  }
}

TEST_CASE("kalman_controllability_form")
{
  const ExampleData e41 = gen_reference_example(ReferenceExample::Ex4_1);
  CHECK(kalman_controllability_form(e41.fom_ph).n_c == 2);

  Rng rng(35);
  PhSystem nc = random_ph(4, 2, rng, false);
  nc.G.setZero();
  CHECK(kalman_controllability_form(ExtendedPhSystem(nc)).n_c == 0);

  for (int trial = 0; trial < 5; ++trial)
  {
    const ExtendedPhSystem sys(synthetic_ph({3, 3, 0, 0}, 1, rng));
    const ControllabilityForm cf = kalman_controllability_form(sys);
    const LtiSystem io = sys.io();
    CHECK(cf.n_c == krylov_rank(io.A, io.B));
    CHECK(cf.n_c == 3);
    CHECK(max_abs_diff(cf.sys.ph.Q, Matrix::Identity(6, 6)) < 1e-12);
    const Matrix JR = cf.sys.ph.J - cf.sys.ph.R;
    CHECK(JR.bottomLeftCorner(3, 3).norm() < 1e-10 * JR.norm());
    CHECK(validate_ph(cf.sys.ph).ok());
  }

  PhSystem indef = e41.fom_ph.ph;
  indef.Q(1, 1) = -1.0;
  CHECK_THROWS_AS(kalman_controllability_form(ExtendedPhSystem(indef)), Error);
}

TEST_CASE("kalman_full_form")
{
  Rng rng(36);
  const ExtendedPhSystem gen(random_ph(5, 2, rng));
  const DecompositionReport d0 = kalman_full_form(gen);
  CHECK(d0.dims == std::array<int, 4>{5, 0, 0, 0});

  const ExampleData e41 = gen_reference_example(ReferenceExample::Ex4_1);
  CHECK(kalman_full_form(e41.fom_ph).dims == std::array<int, 4>{2, 0, 0, 0});

  for (const std::array<int, 4> dims :
       {std::array<int, 4>{3, 2, 1, 2}, std::array<int, 4>{2, 0, 2, 0},
        std::array<int, 4>{1, 1, 1, 1}})
  {
    const ExtendedPhSystem sys(synthetic_ph(dims, 2, rng));
    const DecompositionReport d = kalman_full_form(sys);
    CHECK(d.dims == dims);
    CHECK(max_abs_diff(d.subsystem.ph.Q, Matrix::Identity(dims[0], dims[0])) < 1e-10);
    CHECK(validate_ph(d.subsystem.ph).ok());
    CHECK(h2_dist_extended(sys, d.subsystem) < 1e-7);
  }
}

TEST_CASE("minimal_realization")
{
  const ExampleData e41 = gen_reference_example(ReferenceExample::Ex4_1);
  CHECK(minimal_realization(e41.fom_ph).n() == 2);

  RclParams rp;
  rp.n_cells = 100;
  const ExtendedPhSystem rcl = gen_rcl(rp);
  const ExtendedPhSystem mr = minimal_realization(rcl);
  CHECK(mr.n() < rcl.n());
  CHECK(mr.n() <= 200);
  CHECK(validate_ph(mr.ph).ok());
  CHECK(h2_dist_extended(rcl, mr) < 1e-6 * h2_norm_extended(rcl));
}
