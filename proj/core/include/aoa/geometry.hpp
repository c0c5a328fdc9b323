#pragma once

#include <Eigen/Core>
#include <vector>

#include "aoa/types.hpp"

namespace aoa {

/// 2x3 sensitivity of a sensor's (azimuth, elevation) to the source position,
/// 1/meters. Row 0 is d(azimuth)/d(source); its z entry is exactly zero.
using AngleJacobian = Eigen::Matrix<double, 2, 3>;

/// Exact bearing of `uav` as seen from `source`: azimuth measured in the
/// horizontal plane with a two-argument arctangent, elevation against the
/// horizontal range, so elevation stays inside (-pi/2, pi/2).
///
/// Throws IdenticalPoints when the two positions coincide and
/// DegenerateGeometry when the UAV sits on the vertical axis through the
/// source (azimuth undefined).
AnglePair true_angles(const Point3& source, const Point3& uav);

/// Vertical plane through `uav` containing every point whose azimuth from the
/// horizontal displacement equals `azimuth_rad`.
Plane plane_from_azimuth(double azimuth_rad, const Point3& uav);

/// Plane through `uav` tilted by the measured elevation along the measured
/// azimuth direction. Throws InvalidElevation when |elevation| >= pi/2.
Plane plane_from_elevation(double azimuth_rad, double elevation_rad,
                           const Point3& uav);

/// Euclidean distance from `p` to `plane` (unit normal assumed).
double plane_point_distance(const Plane& plane, const Point3& p);

/// Builds the 2M planes for a measurement set. The measured azimuth enters
/// both the azimuth plane and the elevation plane of its sensor.
/// Throws LengthMismatch / InsufficientSensors (M >= 2 required).
PlaneSet build_plane_set(const AngleMeasurementSet& measurements,
                         const std::vector<Point3>& uavs);

/// Analytic d(angles)/d(source). Same degeneracy errors as true_angles.
AngleJacobian angle_jacobian(const Point3& source, const Point3& uav);

}  // namespace aoa
