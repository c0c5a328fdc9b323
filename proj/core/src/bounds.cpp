#include "aoa/bounds.hpp"

#include <Eigen/Dense>

#include "aoa/geometry.hpp"

namespace aoa {

FisherInfo fisher_information(const Point3& source,
                              const std::vector<Point3>& uavs,
                              const NoiseSpec& noise) {
  if (uavs.size() < 2)
    throw InsufficientSensors("at least 2 sensors are required");
  if (!(noise.sigma2_azimuth > 0.0) || !(noise.sigma2_elevation > 0.0))
    throw ZeroNoise("Fisher information requires positive noise variances");

  const double wt = 1.0 / noise.sigma2_azimuth;
  const double wp = 1.0 / noise.sigma2_elevation;
  FisherInfo info = FisherInfo::Zero();
  for (const Point3& uav : uavs) {
    const AngleJacobian jac = angle_jacobian(source, uav);
    info.noalias() += wt * jac.row(0).transpose() * jac.row(0) +
                      wp * jac.row(1).transpose() * jac.row(1);
  }
  return info;
}

CrlbResult crlb(const Point3& source, const std::vector<Point3>& uavs,
                const NoiseSpec& noise) {
  const FisherInfo info = fisher_information(source, uavs, noise);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(info);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo >= 1e12)
    throw SingularFisher("information matrix is singular; unlocalizable geometry");
  CrlbResult result;
  result.covariance = info.inverse();
  result.trace = result.covariance.trace();
  return result;
}

}  // namespace aoa
