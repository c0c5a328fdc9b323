#pragma once

#include <Eigen/Core>
#include <vector>

#include "aoa/types.hpp"

namespace aoa {

/// Fisher information of the Gaussian angle-measurement model, 1/m^2.
using FisherInfo = Eigen::Matrix3d;

struct CrlbResult {
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // m^2
  double trace = 0.0;                                    // m^2
};

/// F = sum_m g_theta g_theta^T / s2_theta + g_phi g_phi^T / s2_phi with the
/// rows of angle_jacobian. Inverse-variance weighting: the bound grows with
/// the noise. Throws ZeroNoise for non-positive variances, InsufficientSensors
/// for M < 2, and propagates degenerate-geometry errors.
FisherInfo fisher_information(const Point3& source,
                              const std::vector<Point3>& uavs,
                              const NoiseSpec& noise);

/// Inverse Fisher information; the trace is the scalar benchmark the Monte
/// Carlo MSE curves are compared against. Throws SingularFisher when the
/// information matrix is not invertible to working precision.
CrlbResult crlb(const Point3& source, const std::vector<Point3>& uavs,
                const NoiseSpec& noise);

}  // namespace aoa
