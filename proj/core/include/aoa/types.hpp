#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "aoa/errors.hpp"

namespace aoa {

/// Cartesian position in meters.
using Point3 = Eigen::Vector3d;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a, 2.0 * pi);
  if (a <= -pi) a += 2.0 * pi;
  if (a > pi) a -= 2.0 * pi;
  return a;
}

/// One sensor's bearing: azimuth in (-pi, pi], elevation strictly inside
/// (-pi/2, pi/2). Azimuth is wrapped at construction; an out-of-range
/// elevation is rejected (the measurement model never produces |phi| = pi/2).
struct AnglePair {
  double azimuth = 0.0;
  double elevation = 0.0;

  AnglePair() = default;
  AnglePair(double azimuth_rad, double elevation_rad)
      : azimuth(wrap_angle(azimuth_rad)), elevation(elevation_rad) {
    if (!std::isfinite(azimuth_rad) || !std::isfinite(elevation_rad))
      throw NonFinite("angle pair has non-finite component");
    if (std::abs(elevation_rad) >= std::numbers::pi / 2.0)
      throw InvalidElevation("elevation must lie strictly inside (-pi/2, pi/2)");
  }
};

/// Per-UAV measured (azimuth, elevation), index-aligned with the UAV list.
using AngleMeasurementSet = std::vector<AnglePair>;

/// Plane in Hesse normal form: { u : normal . u = offset }, |normal| = 1, so
/// |normal . p - offset| is the Euclidean point-plane distance.
struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 0.0;  // meters
};

/// The 2M measurement planes of a scenario (one azimuth plane and one
/// elevation plane per UAV) plus the UAV positions they were built from.
struct PlaneSet {
  std::vector<Plane> azimuth;
  std::vector<Plane> elevation;
  std::vector<Point3> uav_positions;

  int sensor_count() const { return static_cast<int>(azimuth.size()); }
};

/// Per-angle measurement-noise variances, radians^2.
struct NoiseSpec {
  double sigma2_azimuth = 0.0;
  double sigma2_elevation = 0.0;
};

/// Uniform result shape shared by all estimators. radius / sigma2_hat are
/// populated by the inscribed-sphere estimator only. The trace always holds
/// iterations_used + 1 points, starting at the initializer.
struct EstimateReport {
  Point3 position = Point3::Zero();
  std::optional<double> radius;      // meters
  std::optional<double> sigma2_hat;  // radians^2
  int iterations_used = 0;
  bool converged = false;
  std::vector<Point3> trace;
};

/// A localization setup: one source, M UAVs.
struct Scenario {
  Point3 source = Point3::Zero();
  std::vector<Point3> uavs;

  int sensor_count() const { return static_cast<int>(uavs.size()); }
};

}  // namespace aoa
