#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "aoa/random.hpp"
#include "aoa/types.hpp"

namespace aoa {

enum class CisInit {
  RandomInCube,  // uniform draw in a cube (needs the rng)
  WarmStartLs,   // start at the minimum-squared-distance LS solution
};

/// Which inversion of the radius/noise relation estimate_noise_variance uses.
/// AsPublished follows the printed closed form; MeanAbsConsistent inverts the
/// small-error radius expansion including the E|N(0,s^2)| = s*sqrt(2/pi)
/// factor, which removes the large multiplicative bias of the printed form
/// (see README, "Noise-variance estimate").
enum class NoiseVarianceModel {
  AsPublished,
  MeanAbsConsistent,
};

struct CisOptions {
  int max_iterations = 50;          // K
  double position_tolerance = 1e-6; // meters; stop when the update is smaller
  CisInit initializer = CisInit::WarmStartLs;
  Point3 cube_center = Point3::Zero();  // RandomInCube bounds
  double cube_half_width = 25.0;
  bool stop_on_tolerance = true;  // false: always run max_iterations steps
  NoiseVarianceModel noise_model = NoiseVarianceModel::AsPublished;
};

/// Normal matrix and right-hand side of the plane system: A~ = sum a a^T over
/// all 2M unit normals, b~ = sum a b. Assembled once; both the LS solution
/// and every fixed-point iteration reuse them.
struct NormalEquations {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
};

NormalEquations assemble_normal_equations(const PlaneSet& planes);

/// Center-of-inscribed-sphere estimator. Alternates the closed-form radius
/// update (mean of the 2M plane distances) with the linear position update
/// u = A~^{-1}(b~ + r a~(u)), where a~ sums the planes' signed unit
/// residuals. The report carries the final radius and the noise-variance
/// estimate derived from it.
///
/// Throws RankDeficient when the normal matrix is ill-conditioned (condition
/// number >= 1e12) and NonFinite if an iterate escapes the finite range.
EstimateReport cis_estimate(const PlaneSet& planes, const CisOptions& opts,
                            Rng& rng);

/// Radius update: mean of all 2M point-plane distances at u.
double cis_radius_update(const PlaneSet& planes, const Point3& u);

/// Position update u = A~^{-1}(b~ + r a~(u_prev)). A plane whose distance at
/// u_prev is below 1e-15 m contributes a zero unit residual (the subgradient
/// of |.| at 0 contains 0).
Point3 cis_position_update(const PlaneSet& planes, const Point3& u_prev,
                           double r, const Eigen::Matrix3d& normal_matrix,
                           const Eigen::Vector3d& normal_rhs);

/// Noise-variance estimate from a converged radius. Distances and elevations
/// of the UAVs are evaluated at the estimate (the true source is unknown).
/// Assumes equal azimuth/elevation variances. Throws IdenticalPoints when the
/// estimate coincides with a UAV.
double estimate_noise_variance(
    double r, const Point3& u_hat, const PlaneSet& planes,
    NoiseVarianceModel model = NoiseVarianceModel::AsPublished);

/// Minimum-squared-distance LS estimator: the single normal-equation solve
/// u = A~^{-1} b~ (rows are unit normals, so A^T A = A~).
EstimateReport msd_ls_estimate(const PlaneSet& planes);

/// Total-least-squares variant: smallest right singular direction of the
/// augmented 2M x 4 system [A | b], dehomogenized. Throws DegenerateTLS when
/// the homogeneous coordinate is below 1e-12 in magnitude.
EstimateReport msd_tls_estimate(const PlaneSet& planes);

/// Conventional pseudolinear LS baseline built from the unnormalized
/// tangent-form plane equations. Throws TangentSingularity when any
/// |cos azimuth| or |cos elevation| < 1e-9.
EstimateReport conventional_ls_estimate(const AngleMeasurementSet& measurements,
                                        const std::vector<Point3>& uavs);

/// Maximum-likelihood estimator: damped Gauss-Newton on the weighted squared
/// angle residuals (azimuth residuals wrapped into (-pi, pi]). Step halving
/// up to 20 times per iteration; if no halving decreases the cost the best
/// iterate so far is returned with converged = false.
EstimateReport mle_estimate(const AngleMeasurementSet& measurements,
                            const std::vector<Point3>& uavs,
                            const NoiseSpec& noise, const Point3& init,
                            int max_iterations = 50, double tolerance = 1e-9);

/// Weighted squared-residual MLE cost at u (exposed for tests and oracles).
double mle_cost(const Point3& u, const AngleMeasurementSet& measurements,
                const std::vector<Point3>& uavs, const NoiseSpec& noise);

enum class EstimatorKind { Cis, MsdLs, MsdTls, ConventionalLs, Mle };

std::string estimator_name(EstimatorKind kind);
EstimatorKind parse_estimator(const std::string& name);  // ConfigError on miss

}  // namespace aoa
