// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <doctest.h>
#include "phem/bench_io.hpp"
#include "phem/error.hpp"
#include "phem/gramians.hpp"
#include "phem/kyp.hpp"
#include "phem/systems.hpp"
#include "test_util.hpp"

using namespace phem;
using namespace phem::test;

namespace
{

Matrix scalar(double v)
{
  return Matrix::Constant(1, 1, v);
}

LtiSystem scalar_lti(double a, double b, double c, double d = 0.0)
{
  return LtiSystem(scalar(a), scalar(b), scalar(c), scalar(d));
}

// H(s) through the eigendecomposition of A
ComplexMatrix transfer_by_modes(const LtiSystem &sys, std::complex<double> s)
{
  Eigen::ComplexEigenSolver<ComplexMatrix> es(sys.A.cast<std::complex<double>>());
  const ComplexMatrix V = es.eigenvectors();
  const ComplexMatrix Vi = V.inverse();
  ComplexVector d(sys.n());
  for (Eigen::Index i = 0; i < sys.n(); ++i)
  {
    d(i) = 1.0 / (s - es.eigenvalues()(i));
  }
  return sys.C.cast<std::complex<double>>() * V * d.asDiagonal() * Vi *
             sys.B.cast<std::complex<double>>() +
         sys.D.cast<std::complex<double>>();
}

}  // namespace

TEST_CASE("validate_ph")
{
  const ExampleData ex = gen_reference_example(ReferenceExample::Ex4_1);
  CHECK(validate_ph(ex.fom_ph.ph).ok());

  PhSystem bad = ex.fom_ph.ph;
  bad.J << 0, 1, 1, 0;
  const ValidationReport r1 = validate_ph(bad);
  REQUIRE_FALSE(r1.ok());
  CHECK(r1.to_string().find("skew") != std::string::npos);

  PhSystem neg = ex.fom_ph.ph;
  neg.R << -0.1, 0, 0, 1;
  const ValidationReport r2 = validate_ph(neg);
  REQUIRE(r2.violations.size() == 1);
  CHECK(std::abs(r2.violations[0].magnitude - 0.1) < 1e-12);

  // invariance under a simultaneous permutation of the states
  Rng rng(21);
  const PhSystem ph = random_ph(5, 2, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
  perm.indices() << 3, 0, 4, 1, 2;
  const Matrix Pm = perm * Matrix::Identity(5, 5);
  CHECK(validate_ph(transform_ph(ph, Pm)).ok());
  PhSystem broken = ph;
  broken.R(0, 0) -= 10.0;
  CHECK(validate_ph(broken).ok() == validate_ph(transform_ph(broken, Pm)).ok());
}

TEST_CASE("ph_to_lti on the worked examples")
{
  const ExampleData e41 = gen_reference_example(ReferenceExample::Ex4_1);
  const LtiSystem s41 = ph_to_lti(e41.fom_ph.ph);
  Matrix A(2, 2);
  A << -1, 0, 2, -2;
  CHECK(max_abs_diff(s41.A, A) == 0.0);
  CHECK(max_abs_diff(s41.B, (Matrix(2, 1) << 1, 0).finished()) == 0.0);
  CHECK(max_abs_diff(s41.C, (Matrix(1, 2) << 1, 0).finished()) == 0.0);

  const ExampleData e51 = gen_reference_example(ReferenceExample::Ex5_1);
  const LtiSystem s51 = ph_to_lti(e51.fom_ph.ph);
  A << -2, 1, -1, -1;
  CHECK(max_abs_diff(s51.A, A) == 0.0);
  CHECK(max_abs_diff(s51.B, (Matrix(2, 1) << 6, 0).finished()) == 0.0);

  const PhSystem zero(Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Zero(2, 2),
                      Matrix::Zero(2, 1), Matrix::Zero(2, 1), Matrix::Zero(1, 1),
                      Matrix::Zero(1, 1));
  const LtiSystem z = ph_to_lti(zero);
  CHECK(z.A.norm() + z.B.norm() + z.C.norm() + z.D.norm() == 0.0);
}

TEST_CASE("lti_to_ph")
{
  const ExampleData e51 = gen_reference_example(ReferenceExample::Ex5_1);
  const PhSystem ph = lti_to_ph(*e51.rom_lti, scalar(160.0 / 169.0));
  CHECK(validate_ph(ph).ok());
  CHECK(std::abs(ph.Q(0, 0) - 160.0 / 169.0) < 1e-15);

  // symmetric dissipative case
  Rng rng(22);
  const Matrix A = -random_spd(4, rng);
  const Matrix B = randn(4, 2, rng);
  const LtiSystem sym(A, B, B.transpose(), Matrix::Zero(2, 2));
  const PhSystem ps = lti_to_ph(sym, Matrix::Identity(4, 4));
  CHECK(ps.J.norm() < 1e-14);
  CHECK(max_abs_diff(ps.R, -A) < 1e-14);
  CHECK(ps.P.norm() < 1e-14);

  // round trip with the minimal Riccati solution
  for (int trial = 0; trial < 5; ++trial)
  {
    const LtiSystem sys = ph_to_lti(random_ph(6, 2, rng));
    const Matrix X = extremal_solutions(sys).first.X;
    const LtiSystem back = ph_to_lti(lti_to_ph(sys, X));
    CHECK((back.A - sys.A).norm() / sys.A.norm() < 1e-10);
    CHECK((back.B - sys.B).norm() / sys.B.norm() < 1e-10);
    CHECK((back.C - sys.C).norm() / sys.C.norm() < 1e-10);
    CHECK((back.D - sys.D).norm() / sys.D.norm() < 1e-10);
  }

  try
  {
    lti_to_ph(*e51.rom_lti, scalar(3.0));
    FAIL("expected an exception");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::NotFeasible);
  }
  try
  {
    lti_to_ph(*e51.rom_lti, scalar(-1.0));
    FAIL("expected an exception");
  }
  catch (const Error &e)
  {
    CHECK((e.kind() == ErrorKind::NotPositiveDefinite || e.kind() == ErrorKind::NotFeasible));
  }
}

TEST_CASE("evaluate_transfer")
{
  CHECK(std::abs(evaluate_transfer(scalar_lti(-1, 1, 1), 0.0)(0, 0) - 1.0) < 1e-15);

  const ExampleData e41 = gen_reference_example(ReferenceExample::Ex4_1);
  const std::complex<double> i(0.0, 1.0);
  CHECK(std::abs(evaluate_transfer(e41.fom_lti, i)(0, 0) -
                 evaluate_transfer(*e41.rom_lti, i)(0, 0)) < 1e-15);

  Rng rng(23);
  const LtiSystem sys(random_stable(6, rng), randn(6, 2, rng), randn(3, 6, rng), randn(3, 2, rng));
  for (int k = 0; k < 5; ++k)
  {
    const std::complex<double> s(uniform(-1, 1, rng), uniform(-3, 3, rng));
    const ComplexMatrix H = evaluate_transfer(sys, s);
    CHECK((H - transfer_by_modes(sys, s)).norm() / H.norm() < 1e-10);
  }

  try
  {
    evaluate_transfer(scalar_lti(-1, 1, 1), -1.0);
    FAIL("expected an exception");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::SingularShift);
  }
}

TEST_CASE("simulate")
{
  Signal zero;
  zero.times = {0.0, 1.0};
  zero.values = Matrix::Zero(1, 2);
  const ExampleData e41 = gen_reference_example(ReferenceExample::Ex4_1);
  const Trajectory t0 = simulate(e41.fom_ph, zero, Vector::Zero(2), 0.01);
  CHECK(t0.y.cwiseAbs().maxCoeff() == 0.0);
  CHECK(t0.yH.cwiseAbs().maxCoeff() == 0.0);

  // scalar: x' = -a x + b u, H = q x^2 / 2
  const double a = 2.0, b = 1.5, q = 3.0, u = 0.8;
  const PhSystem sc(scalar(0), scalar(a / q), scalar(q), scalar(b), scalar(0), scalar(1),
                    scalar(0));
  Signal step;
  step.times = {0.0, 20.0};
  step.values = Matrix::Constant(1, 2, u);
  const Trajectory ts = simulate(ExtendedPhSystem(sc), step, Vector::Zero(1), 0.01);
  const double xs = b * u / a;
  CHECK(std::abs(ts.yH(ts.yH.size() - 1) - 0.5 * q * xs * xs) < 1e-8);

  // the io-minimal reduction reproduces y, not the Hamiltonian
  Signal one;
  one.times = {0.0, 5.0};
  one.values = Matrix::Ones(1, 2);
  const Trajectory tf = simulate(e41.fom_ph, one, Vector::Zero(2), 0.01);
  const Trajectory tr = simulate(*e41.rom_ph, one, Vector::Zero(1), 0.01);
  CHECK((tf.y - tr.y).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((tf.yH - tr.yH).cwiseAbs().maxCoeff() > 1e-2);

  // lossless system conserves the Hamiltonian
  Rng rng(24);
  const PhSystem lossless(random_skew(4, rng), Matrix::Zero(4, 4), random_spd(4, rng),
                          randn(4, 1, rng), Matrix::Zero(4, 1), Matrix::Zero(1, 1),
                          Matrix::Zero(1, 1));
  const Trajectory tl = simulate(ExtendedPhSystem(lossless), zero, randn(4, 1, rng), 0.01);
  const double h0 = tl.yH(0);
  CHECK((tl.yH.array() - h0).abs().maxCoeff() < 1e-10 * h0);

  // second order in dt
  Signal sc2;
  sc2.times = {0.0, 1.0, 2.0};
  sc2.values = Matrix(1, 3);
  sc2.values << 0.0, 1.0, 0.0;
  const ExtendedPhSystem e51 = gen_reference_example(ReferenceExample::Ex5_1).fom_ph;
  const Trajectory ref = simulate(e51, sc2, Vector::Zero(2), 1e-4);
  const Trajectory c1 = simulate(e51, sc2, Vector::Zero(2), 0.02);
  const Trajectory c2 = simulate(e51, sc2, Vector::Zero(2), 0.01);
  const double err1 = std::abs(c1.y(0, c1.y.cols() - 1) - ref.y(0, ref.y.cols() - 1));
  const double err2 = std::abs(c2.y(0, c2.y.cols() - 1) - ref.y(0, ref.y.cols() - 1));
  CHECK(err1 / err2 > 3.0);
  CHECK(err1 / err2 < 5.0);

  CHECK_THROWS_AS(simulate(e51, sc2, Vector::Zero(2), 0.0), Error);
}

TEST_CASE("gramians")
{
  const ExampleData e51 = gen_reference_example(ReferenceExample::Ex5_1);
  const GramianSet g = gramians(e51.fom_lti);
  CHECK(max_abs_diff(g.P_ctrl, (Matrix(2, 2) << 8, -2, -2, 2).finished()) < 1e-12);
  CHECK(std::abs(gramians(scalar_lti(-3, 2, 1)).P_ctrl(0, 0) - 4.0 / 6.0) < 1e-15);

  // scalar a = 1, b = 1, q = 2: P = 1/2, O_qo = q P q / 4 / (2a) = 1/4
  const LtiqoSystem sq(scalar(-1), scalar(1), scalar(2));
  const Matrix Oqo = qo_obs_gramian(sq, scalar(0.5));
  CHECK(std::abs(Oqo(0, 0) - 0.25) < 1e-15);
  CHECK(qo_obs_gramian(LtiqoSystem(scalar(-1), scalar(1), scalar(0)), scalar(0.5)).norm() == 0.0);

  Rng rng(25);
  const Matrix A = random_stable(8, rng);
  const Matrix B = randn(8, 2, rng);
  const Matrix Qo = random_spd(8, rng);
  const GramianSet g8 = gramians(LtiSystem(A, B, randn(3, 8, rng), Matrix::Zero(3, 2)));
  CHECK((A * g8.P_ctrl + g8.P_ctrl * A.transpose() + B * B.transpose()).norm() /
            (A.norm() * g8.P_ctrl.norm()) <
        1e-12);
  const Matrix O = qo_obs_gramian(LtiqoSystem(A, B, Qo), g8.P_ctrl);
  const Matrix rhs = 0.25 * Qo * g8.P_ctrl * Qo;
  CHECK((A.transpose() * O + O * A + rhs).norm() / (A.norm() * O.norm()) < 1e-12);
}

TEST_CASE("h2 norms")
{
  CHECK(std::abs(h2_norm_lti(scalar_lti(-1, 1, 1)) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(h2_norm_lti(scalar_lti(-3, 2, 5)) - std::sqrt(25.0 * 4.0 / 6.0)) < 1e-14);

  const ExampleData e51 = gen_reference_example(ReferenceExample::Ex5_1);
  const double nh = h2_norm_ltiqo(e51.fom_ph.ham());
  CHECK(std::abs(nh * nh - 19.0) < 1e-12);
  CHECK(h2_norm_ltiqo(LtiqoSystem(scalar(-1), scalar(1), scalar(0))) == 0.0);
  CHECK(std::abs(h2_norm_ltiqo(LtiqoSystem(scalar(-1), scalar(1), scalar(2))) - 0.5) < 1e-15);

  // primal and dual formulas
  Rng rng(26);
  for (int trial = 0; trial < 5; ++trial)
  {
    const Matrix A = random_stable(7, rng);
    const LtiSystem sys(A, randn(7, 2, rng), randn(3, 7, rng), Matrix::Zero(3, 2));
    const GramianSet g = gramians(sys);
    const double n1 = std::sqrt((sys.C * g.P_ctrl * sys.C.transpose()).trace());
    const double n2 = std::sqrt((sys.B.transpose() * g.O_obs * sys.B).trace());
    CHECK(std::abs(h2_norm_lti(sys) - n1) < 1e-10 * n1);
    CHECK(std::abs(n1 - n2) < 1e-10 * n1);

    const Matrix Qo = random_spd(7, rng);
    const LtiqoSystem qo(A, sys.B, Qo);
    const Matrix PQ = g.P_ctrl * Qo;
    const double t1 = 0.25 * (PQ * PQ).trace();
    const double t2 = (sys.B.transpose() * qo_obs_gramian(qo, g.P_ctrl) * sys.B).trace();
    CHECK(std::abs(t1 - t2) < 1e-10 * t1);
  }

  CHECK_THROWS_AS(h2_norm_lti(scalar_lti(1, 1, 1)), Error);
}

TEST_CASE("h2 distances")
{
  const LtiSystem s1 = scalar_lti(-1, 1, 1), s2 = scalar_lti(-2, 1, 1);
  CHECK(h2_dist_lti(s1, s1) < 1e-15);
  CHECK(std::abs(h2_dist_lti(s1, s2) - std::sqrt(1.0 / 12.0)) < 1e-14);

  const ExampleData e41 = gen_reference_example(ReferenceExample::Ex4_1);
  CHECK(h2_dist_lti(e41.fom_lti, *e41.rom_lti) < 1e-14);
  CHECK(std::abs(h2_dist_ltiqo(e41.fom_ph.ham(), e41.rom_ph->ham()) - 1.0 / 6.0) < 1e-14);
  CHECK(std::abs(h2_dist_extended(e41.fom_ph, *e41.rom_ph) - 1.0 / 6.0) < 1e-14);
  CHECK(h2_dist_extended(e41.fom_ph, e41.fom_ph) < 1e-7);

  Rng rng(27);
  for (int trial = 0; trial < 5; ++trial)
  {
    const ExtendedPhSystem f(random_ph(6, 2, rng));
    ExtendedPhSystem r(random_ph(3, 2, rng));
    r.ph.S = f.ph.S;
    r.ph.N = f.ph.N;
    const double dq = h2_dist_ltiqo(f.ham(), r.ham());
    CHECK(std::abs(dq - h2_dist_ltiqo_joint(f.ham(), r.ham())) < 1e-10 * std::max(1.0, dq));
    CHECK(std::abs(dq - h2_dist_ltiqo(r.ham(), f.ham())) < 1e-10 * std::max(1.0, dq));
    const double di = h2_dist_lti(f.io(), r.io());
    const double de = h2_dist_extended(f, r);
    CHECK(std::abs(de - std::hypot(di, dq)) < 1e-10 * de);
    CHECK(de >= di);
    CHECK(de >= dq);
  }

  LtiSystem s3 = s2;
  s3.D(0, 0) = 1.0;
  try
  {
    h2_dist_lti(s1, s3);
    FAIL("expected an exception");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::FeedthroughMismatch);
  }
}
