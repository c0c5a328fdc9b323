#include "aoa/estimators.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "aoa/geometry.hpp"

namespace aoa {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kZeroResidual = 1e-15;  // meters

// 3x3 SPD solve with a condition check shared by CIS and MSD-LS.
struct CheckedNormalSolver {
  explicit CheckedNormalSolver(const Eigen::Matrix3d& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo >= kConditionLimit)
      throw RankDeficient("plane normal matrix is singular or ill-conditioned");
    solver.compute(m);
  }
  Eigen::Vector3d solve(const Eigen::Vector3d& rhs) const {
    return solver.solve(rhs);
  }
  Eigen::LDLT<Eigen::Matrix3d> solver;
};

// Signed unit residuals summed over all 2M planes (a~ of the position
// update); near-zero distances contribute nothing.
Eigen::Vector3d signed_unit_residuals(const PlaneSet& planes, const Point3& u) {
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  auto add = [&](const Plane& p) {
    const double res = p.normal.dot(u) - p.offset;
    if (std::abs(res) >= kZeroResidual)
      acc += (res > 0.0 ? 1.0 : -1.0) * p.normal;
  };
  for (const Plane& p : planes.azimuth) add(p);
  for (const Plane& p : planes.elevation) add(p);
  return acc;
}

EstimateReport direct_report(const Point3& u) {
  EstimateReport report;
  report.position = u;
  report.iterations_used = 0;
  report.converged = true;
  report.trace = {u};
  return report;
}

}  // namespace

NormalEquations assemble_normal_equations(const PlaneSet& planes) {
  NormalEquations ne;
  auto add = [&](const Plane& p) {
    ne.matrix.noalias() += p.normal * p.normal.transpose();
    ne.rhs.noalias() += p.normal * p.offset;
  };
  for (const Plane& p : planes.azimuth) add(p);
  for (const Plane& p : planes.elevation) add(p);
  return ne;
}

double cis_radius_update(const PlaneSet& planes, const Point3& u) {
  double sum = 0.0;
  for (const Plane& p : planes.azimuth) sum += plane_point_distance(p, u);
  for (const Plane& p : planes.elevation) sum += plane_point_distance(p, u);
  return sum / (2.0 * static_cast<double>(planes.azimuth.size()));
}

Point3 cis_position_update(const PlaneSet& planes, const Point3& u_prev,
                           double r, const Eigen::Matrix3d& normal_matrix,
                           const Eigen::Vector3d& normal_rhs) {
  const CheckedNormalSolver solver(normal_matrix);
  return solver.solve(normal_rhs + r * signed_unit_residuals(planes, u_prev));
}

double estimate_noise_variance(double r, const Point3& u_hat,
                               const PlaneSet& planes,
                               NoiseVarianceModel model) {
  const double m = static_cast<double>(planes.uav_positions.size());
  double sum_sq = 0.0;   // sum d^2 (cos^2 phi + 1)
  double sum_abs = 0.0;  // sum d (|cos phi| + 1)
  for (const Point3& uav : planes.uav_positions) {
    const Point3 diff = uav - u_hat;
    const double dist = diff.norm();
    if (dist == 0.0)
      throw IdenticalPoints("estimate coincides with a UAV position");
    const double cos_phi = std::hypot(diff.x(), diff.y()) / dist;
    sum_sq += dist * dist * (cos_phi * cos_phi + 1.0);
    sum_abs += dist * (std::abs(cos_phi) + 1.0);
  }
  if (model == NoiseVarianceModel::AsPublished)
    return 4.0 * m * m * r * r / sum_sq;
  const double sigma =
      2.0 * m * r * std::sqrt(std::numbers::pi / 2.0) / sum_abs;
  return sigma * sigma;
}

EstimateReport cis_estimate(const PlaneSet& planes, const CisOptions& opts,
                            Rng& rng) {
  const NormalEquations ne = assemble_normal_equations(planes);
  const CheckedNormalSolver solver(ne.matrix);

  Point3 u;
  if (opts.initializer == CisInit::WarmStartLs) {
    u = solver.solve(ne.rhs);
  } else {
    u = opts.cube_center +
        Point3(rng.uniform(-opts.cube_half_width, opts.cube_half_width),
               rng.uniform(-opts.cube_half_width, opts.cube_half_width),
               rng.uniform(-opts.cube_half_width, opts.cube_half_width));
  }

  EstimateReport report;
  report.trace.reserve(static_cast<std::size_t>(opts.max_iterations) + 1);
  report.trace.push_back(u);

  double radius = 0.0;
  bool have_radius = false;
  for (int k = 0; k < opts.max_iterations; ++k) {
    radius = cis_radius_update(planes, u);
    have_radius = true;
    const Point3 next =
        solver.solve(ne.rhs + radius * signed_unit_residuals(planes, u));
    if (!next.allFinite()) throw NonFinite("iterate left the finite range");
    const double step = (next - u).norm();
    u = next;
    report.trace.push_back(u);
    report.iterations_used = k + 1;
    if (opts.stop_on_tolerance && step < opts.position_tolerance) {
      report.converged = true;
      break;
    }
  }
  if (!have_radius) radius = cis_radius_update(planes, u);

  report.position = u;
  report.radius = radius;
  report.sigma2_hat =
      estimate_noise_variance(radius, u, planes, opts.noise_model);
  return report;
}

EstimateReport msd_ls_estimate(const PlaneSet& planes) {
  const NormalEquations ne = assemble_normal_equations(planes);
  const CheckedNormalSolver solver(ne.matrix);
  return direct_report(solver.solve(ne.rhs));
}

EstimateReport msd_tls_estimate(const PlaneSet& planes) {
  const NormalEquations ne = assemble_normal_equations(planes);
  CheckedNormalSolver check(ne.matrix);  // rank precondition, same threshold

  const int m = planes.sensor_count();
  Eigen::MatrixXd augmented(2 * m, 4);
  for (int i = 0; i < m; ++i) {
    augmented.row(i) << planes.azimuth[i].normal.transpose(),
        planes.azimuth[i].offset;
    augmented.row(m + i) << planes.elevation[i].normal.transpose(),
        planes.elevation[i].offset;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(augmented, Eigen::ComputeThinV);
  const Eigen::Vector4d v = svd.matrixV().col(3);
  if (std::abs(v(3)) < 1e-12)
    throw DegenerateTLS("homogeneous coordinate vanishes; solution at infinity");
  // [A | b] [u; -1] = 0  =>  u = -v_{0:2} / v_3
  return direct_report(-v.head<3>() / v(3));
}

EstimateReport conventional_ls_estimate(const AngleMeasurementSet& measurements,
                                        const std::vector<Point3>& uavs) {
  if (measurements.size() != uavs.size())
    throw LengthMismatch("measurement count does not match UAV count");
  if (uavs.size() < 2)
    throw InsufficientSensors("at least 2 sensors are required");

  const int m = static_cast<int>(uavs.size());
  Eigen::MatrixXd h(2 * m, 3);
  Eigen::VectorXd y(2 * m);
  for (int i = 0; i < m; ++i) {
    const double theta = measurements[i].azimuth;
    const double phi = measurements[i].elevation;
    const double ct = std::cos(theta);
    const double cp = std::cos(phi);
    if (std::abs(ct) < 1e-9 || std::abs(cp) < 1e-9)
      throw TangentSingularity("tangent blows up at |angle| = pi/2");
    const double tt = std::tan(theta);
    const double tp = std::tan(phi);
    const double st = std::sin(theta);
    const Point3& uav = uavs[i];
    h.row(i) << tt, -1.0, 0.0;
    y(i) = tt * uav.x() - uav.y();
    h.row(m + i) << tp * ct, tp * st, -1.0;
    y(m + i) = tp * ct * uav.x() + tp * st * uav.y() - uav.z();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > 0.0) || sv(0) / sv(2) >= 1e6)  // cond(H^T H) >= 1e12
    throw RankDeficient("pseudolinear system is rank deficient");
  return direct_report(svd.solve(y));
}

double mle_cost(const Point3& u, const AngleMeasurementSet& measurements,
                const std::vector<Point3>& uavs, const NoiseSpec& noise) {
  double cost = 0.0;
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    const AnglePair predicted = true_angles(u, uavs[i]);
    const double rt = wrap_angle(predicted.azimuth - measurements[i].azimuth);
    const double rp = wrap_angle(predicted.elevation - measurements[i].elevation);
    cost += rt * rt / noise.sigma2_azimuth + rp * rp / noise.sigma2_elevation;
  }
  return cost;
}

EstimateReport mle_estimate(const AngleMeasurementSet& measurements,
                            const std::vector<Point3>& uavs,
                            const NoiseSpec& noise, const Point3& init,
                            int max_iterations, double tolerance) {
  if (measurements.size() != uavs.size())
    throw LengthMismatch("measurement count does not match UAV count");
  if (!(noise.sigma2_azimuth > 0.0) || !(noise.sigma2_elevation > 0.0))
    throw ZeroNoise("MLE weighting requires positive noise variances");

  const double wt = 1.0 / noise.sigma2_azimuth;
  const double wp = 1.0 / noise.sigma2_elevation;

  EstimateReport report;
  report.trace.push_back(init);
  Point3 u = init;
  double cost = mle_cost(u, measurements, uavs, noise);

  for (int k = 0; k < max_iterations; ++k) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < uavs.size(); ++i) {
      const AnglePair predicted = true_angles(u, uavs[i]);
      const AngleJacobian jac = angle_jacobian(u, uavs[i]);
      const double rt = wrap_angle(predicted.azimuth - measurements[i].azimuth);
      const double rp =
          wrap_angle(predicted.elevation - measurements[i].elevation);
      jtj.noalias() += wt * jac.row(0).transpose() * jac.row(0) +
                       wp * jac.row(1).transpose() * jac.row(1);
      jtr.noalias() += wt * rt * jac.row(0).transpose() +
                       wp * rp * jac.row(1).transpose();
    }
    const Eigen::Vector3d step = -jtj.ldlt().solve(jtr);
    if (!step.allFinite()) throw NonFinite("Gauss-Newton step is not finite");
    if (step.norm() < tolerance) {
      report.converged = true;
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 20; ++halving) {
      const Point3 candidate = u + alpha * step;
      const double candidate_cost =
          mle_cost(candidate, measurements, uavs, noise);
      if (candidate_cost < cost) {
        u = candidate;
        cost = candidate_cost;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // damping exhausted: best-so-far, flagged unconverged
      report.position = u;
      report.converged = false;
      return report;
    }
    report.trace.push_back(u);
    report.iterations_used = k + 1;
    if (alpha * step.norm() < tolerance) {
      report.converged = true;
      break;
    }
  }
  report.position = u;
  return report;  // converged stays false when the cap ran out
}

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Cis: return "cis";
    case EstimatorKind::MsdLs: return "msd-ls";
    case EstimatorKind::MsdTls: return "msd-tls";
    case EstimatorKind::ConventionalLs: return "ls";
    case EstimatorKind::Mle: return "mle";
  }
  return "unknown";
}

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "cis") return EstimatorKind::Cis;
  if (name == "msd-ls") return EstimatorKind::MsdLs;
  if (name == "msd-tls") return EstimatorKind::MsdTls;
  if (name == "ls") return EstimatorKind::ConventionalLs;
  if (name == "mle") return EstimatorKind::Mle;
  throw ConfigError("unknown estimator '" + name +
                    "' (expected cis, msd-ls, msd-tls, ls or mle)");
}

}  // namespace aoa
