#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "aoa/bounds.hpp"
#include "aoa/montecarlo.hpp"
#include "aoa/random.hpp"
#include "support/oracles.hpp"

using aoa::Point3;
using doctest::Approx;

TEST_CASE("fisher information: linear in the inverse variances") {
  aoa::Rng rng(21);
  const aoa::Scenario sc = oracles::random_scenario(rng, 8);
  const aoa::NoiseSpec noise{1e-3, 2e-3};
  const aoa::NoiseSpec doubled{2e-3, 4e-3};
  const Eigen::Matrix3d f1 = aoa::fisher_information(sc.source, sc.uavs, noise);
  const Eigen::Matrix3d f2 =
      aoa::fisher_information(sc.source, sc.uavs, doubled);
  CHECK((f2 - 0.5 * f1).norm() <= 1e-12 * f1.norm());
}

TEST_CASE("fisher information: symmetric positive definite off degeneracy") {
  aoa::Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const aoa::Scenario sc = oracles::random_scenario(rng, 2 + i % 12);
    const Eigen::Matrix3d f =
        aoa::fisher_information(sc.source, sc.uavs, {1e-3, 1e-3});
    CHECK((f - f.transpose()).norm() <= 1e-12 * f.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(f);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("fisher information: matches the finite-difference construction") {
  aoa::Rng rng(23);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const aoa::Scenario sc = oracles::random_scenario(rng, 2 + i % 10);
    const aoa::NoiseSpec noise{1e-3, 4e-3};
    const Eigen::Matrix3d f =
        aoa::fisher_information(sc.source, sc.uavs, noise);
    const Eigen::Matrix3d fd = oracles::fd_fisher(sc.source, sc.uavs, noise);
    worst = std::max(worst, (f - fd).norm() / fd.norm());
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("two sensors on one ray from the source cannot localize") {
  const Point3 source(1, 2, 3);
  const Point3 dir = Point3(2, 1, 1).normalized();
  const std::vector<Point3> uavs{source + 10 * dir, source + 25 * dir};
  const Eigen::Matrix3d f =
      aoa::fisher_information(source, uavs, {1e-3, 1e-3});
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(f);
  CHECK(eig.eigenvalues()(0) <= 1e-9 * eig.eigenvalues()(2));  // rank < 3
  CHECK_THROWS_AS(aoa::crlb(source, uavs, {1e-3, 1e-3}), aoa::SingularFisher);
}

TEST_CASE("crlb: doubling both variances doubles the bound") {
  aoa::Rng rng(24);
  const aoa::Scenario sc = oracles::random_scenario(rng, 10);
  const aoa::CrlbResult b1 = aoa::crlb(sc.source, sc.uavs, {1e-3, 1e-3});
  const aoa::CrlbResult b2 = aoa::crlb(sc.source, sc.uavs, {2e-3, 2e-3});
  CHECK(b2.trace == Approx(2.0 * b1.trace).epsilon(1e-12));
  CHECK((b2.covariance - 2.0 * b1.covariance).norm() <=
        1e-12 * b1.covariance.norm());
}

TEST_CASE("crlb trace in dB is affine with slope 1 in sigma^2 dB") {
  aoa::Rng rng(25);
  const aoa::Scenario sc =
      aoa::generate_scenario(Point3::Zero(), 25.0, 20, rng);
  double sum_x = 0, sum_y = 0, sum_xx = 0, sum_xy = 0;
  int n = 0;
  for (double db = -30.0; db <= 0.5; db += 5.0) {
    const double s2 = aoa::from_decibels(db);
    const double trace_db =
        aoa::to_decibels(aoa::crlb(sc.source, sc.uavs, {s2, s2}).trace);
    sum_x += db;
    sum_y += trace_db;
    sum_xx += db * db;
    sum_xy += db * trace_db;
    ++n;
  }
  const double slope =
      (n * sum_xy - sum_x * sum_y) / (n * sum_xx - sum_x * sum_x);
  CHECK(slope == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("crlb: inverse of the finite-difference information") {
  aoa::Rng rng(26);
  const aoa::Scenario sc = oracles::random_scenario(rng, 7);
  const aoa::NoiseSpec noise{1e-3, 1e-3};
  const aoa::CrlbResult bound = aoa::crlb(sc.source, sc.uavs, noise);
  const Eigen::Matrix3d fd_inv =
      oracles::cofactor_inverse(oracles::fd_fisher(sc.source, sc.uavs, noise));
  CHECK((bound.covariance - fd_inv).norm() <= 1e-5 * fd_inv.norm());
}

TEST_CASE("rotating the setup about the vertical axis rotates the bound") {
  // the azimuth/elevation noise model is symmetric under z rotations only;
  // a general orthogonal rotation changes the per-angle information split
  aoa::Rng rng(27);
  for (int i = 0; i < 50; ++i) {
    const aoa::Scenario sc = oracles::random_scenario(rng, 6);
    const double alpha = rng.uniform(-std::numbers::pi, std::numbers::pi);
    Eigen::Matrix3d q;
    q << std::cos(alpha), -std::sin(alpha), 0.0,
         std::sin(alpha),  std::cos(alpha), 0.0,
         0.0, 0.0, 1.0;
    std::vector<Point3> rotated;
    for (const Point3& uav : sc.uavs) rotated.push_back(q * uav);
    const aoa::NoiseSpec noise{1e-3, 3e-3};
    const aoa::CrlbResult base = aoa::crlb(sc.source, sc.uavs, noise);
    const aoa::CrlbResult rot = aoa::crlb(q * sc.source, rotated, noise);
    CHECK((rot.covariance - q * base.covariance * q.transpose()).norm() <=
          1e-9 * base.covariance.norm());
  }
}

TEST_CASE("adding a sensor never loosens any diagonal of the bound") {
  aoa::Rng rng(28);
  for (int i = 0; i < 50; ++i) {
    aoa::Scenario sc = oracles::random_scenario(rng, 4 + i % 8);
    const aoa::NoiseSpec noise{1e-3, 1e-3};
    const aoa::CrlbResult before = aoa::crlb(sc.source, sc.uavs, noise);
    const aoa::Scenario extra = aoa::generate_scenario(sc.source, 25.0, 2, rng);
    sc.uavs.push_back(extra.uavs[0]);
    const aoa::CrlbResult after = aoa::crlb(sc.source, sc.uavs, noise);
    for (int d = 0; d < 3; ++d)
      CHECK(after.covariance(d, d) <=
            before.covariance(d, d) * (1.0 + 1e-12));
  }
}

TEST_CASE("bounds: invalid inputs") {
  aoa::Rng rng(29);
  const aoa::Scenario sc = oracles::random_scenario(rng, 4);
  CHECK_THROWS_AS(aoa::fisher_information(sc.source, sc.uavs, {0.0, 1e-3}),
                  aoa::ZeroNoise);
  CHECK_THROWS_AS(
      aoa::fisher_information(sc.source, {sc.uavs[0]}, {1e-3, 1e-3}),
      aoa::InsufficientSensors);
}
