#pragma once

#include <Eigen/Dense>

#include "fused/core/errors.hpp"
#include "fused/core/lead.hpp"

namespace fused {

/// Linear constant-velocity track over (x, y, vx, vy). Lateral velocity is
/// not observable through the sensor interface and is held constant: it
/// neither propagates into y nor receives process noise.
struct KalmanTrack {
  Eigen::Vector4d state = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
  int age = 0;
  int missed = 0;
  int id = 0;
  /// |y| stored at the end of the previous tick, for lateral-approach checks.
  double previous_abs_y = 0.0;
  bool has_previous = false;

  double x() const { return state(0); }
  double y() const { return state(1); }
  double vx() const { return state(2); }
  Lead to_lead() const { return {state(0), state(1), state(2), std::nullopt}; }
};

/// Per-second process noise on (x, y, vx).
struct ProcessNoise {
  double q_x = 0.05;
  double q_y = 0.05;
  double q_v = 0.2;

  Eigen::Matrix4d matrix(double dt) const {
    return Eigen::Vector4d(q_x * dt, q_y * dt, q_v * dt, 0.0).asDiagonal();
  }
  friend bool operator==(const ProcessNoise &, const ProcessNoise &) = default;
};

inline Eigen::Matrix<double, 3, 4> measurement_matrix() {
  Eigen::Matrix<double, 3, 4> h = Eigen::Matrix<double, 3, 4>::Zero();
  h(0, 0) = h(1, 1) = h(2, 2) = 1.0;
  return h;
}

inline KalmanTrack kf_predict(KalmanTrack t, double dt, const ProcessNoise &q = {}) {
  if (!(dt > 0.0)) throw NumericalError("kf_predict requires dt > 0");
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt;
  t.state = f * t.state;
  t.covariance = f * t.covariance * f.transpose() + q.matrix(dt);
  t.covariance = (0.5 * (t.covariance + t.covariance.transpose())).eval();
  return t;
}

/// Kalman update on (x, y, vx). Joseph form keeps the posterior PSD.
inline KalmanTrack kf_update(KalmanTrack t, const Lead &meas, const Eigen::Matrix3d &r) {
  const Eigen::Matrix<double, 3, 4> h = measurement_matrix();
  const Eigen::Matrix3d s = h * t.covariance * h.transpose() + r;
  const Eigen::LLT<Eigen::Matrix3d> llt(s);
  if (llt.info() != Eigen::Success || !s.allFinite())
    throw NumericalError("kf_update: innovation covariance is not positive definite");
  const Eigen::Matrix<double, 4, 3> k = llt.solve(h * t.covariance).transpose();
  const Eigen::Vector3d z(meas.rel_x, meas.rel_y, meas.rel_v);
  t.state += k * (z - h * t.state);
  const Eigen::Matrix4d i_kh = Eigen::Matrix4d::Identity() - k * h;
  t.covariance = i_kh * t.covariance * i_kh.transpose() + k * r * k.transpose();
  t.covariance = (0.5 * (t.covariance + t.covariance.transpose())).eval();
  return t;
}

inline KalmanTrack spawn_track(const Lead &meas, const Eigen::Matrix3d &r, int id) {
  KalmanTrack t;
  t.state = Eigen::Vector4d(meas.rel_x, meas.rel_y, meas.rel_v, 0.0);
  t.covariance = Eigen::Matrix4d::Zero();
  t.covariance.topLeftCorner<3, 3>() = r;
  t.id = id;
  return t;
}

}  // namespace fused
