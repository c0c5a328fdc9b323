#include "aoa/geometry.hpp"

#include <cmath>

namespace aoa {

AnglePair true_angles(const Point3& source, const Point3& uav) {
  const Point3 d = uav - source;
  if (d.isZero(0.0)) throw IdenticalPoints("UAV coincides with the source");
  const double rho = std::hypot(d.x(), d.y());
  if (rho == 0.0)
    throw DegenerateGeometry(
        "UAV on the vertical axis through the source; azimuth undefined");
  const double theta = std::atan2(d.y(), d.x());
  const double phi = std::atan2(d.z(), rho);  // rho > 0 keeps |phi| < pi/2
  return AnglePair(theta, phi);
}

Plane plane_from_azimuth(double azimuth_rad, const Point3& uav) {
  const double s = std::sin(azimuth_rad);
  const double c = std::cos(azimuth_rad);
  Plane p;
  p.normal = Eigen::Vector3d(s, -c, 0.0);
  p.offset = s * uav.x() - c * uav.y();
  return p;
}

Plane plane_from_elevation(double azimuth_rad, double elevation_rad,
                           const Point3& uav) {
  if (!(std::abs(elevation_rad) < std::numbers::pi / 2.0))
    throw InvalidElevation("elevation must lie strictly inside (-pi/2, pi/2)");
  const double st = std::sin(azimuth_rad);
  const double ct = std::cos(azimuth_rad);
  const double sp = std::sin(elevation_rad);
  const double cp = std::cos(elevation_rad);
  Plane p;
  p.normal = Eigen::Vector3d(sp * ct, sp * st, -cp);
  p.offset = p.normal.dot(uav);
  return p;
}

double plane_point_distance(const Plane& plane, const Point3& p) {
  return std::abs(plane.normal.dot(p) - plane.offset);
}

PlaneSet build_plane_set(const AngleMeasurementSet& measurements,
                         const std::vector<Point3>& uavs) {
  if (measurements.size() != uavs.size())
    throw LengthMismatch("measurement count does not match UAV count");
  if (uavs.size() < 2)
    throw InsufficientSensors("at least 2 sensors are required");
  PlaneSet set;
  set.azimuth.reserve(uavs.size());
  set.elevation.reserve(uavs.size());
  for (std::size_t m = 0; m < uavs.size(); ++m) {
    set.azimuth.push_back(plane_from_azimuth(measurements[m].azimuth, uavs[m]));
    set.elevation.push_back(plane_from_elevation(
        measurements[m].azimuth, measurements[m].elevation, uavs[m]));
  }
  set.uav_positions = uavs;
  return set;
}

AngleJacobian angle_jacobian(const Point3& source, const Point3& uav) {
  const AnglePair angles = true_angles(source, uav);
  const double dist = (uav - source).norm();
  const double st = std::sin(angles.azimuth);
  const double ct = std::cos(angles.azimuth);
  const double sp = std::sin(angles.elevation);
  const double cp = std::cos(angles.elevation);
  AngleJacobian jac;
  jac(0, 0) = st / (dist * cp);
  jac(0, 1) = -ct / (dist * cp);
  jac(0, 2) = 0.0;
  jac(1, 0) = sp * ct / dist;
  jac(1, 1) = sp * st / dist;
  jac(1, 2) = -cp / dist;
  return jac;
}

}  // namespace aoa
