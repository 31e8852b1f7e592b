// Copyright 2026 The Origami Crawler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crawler/kinematics.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "crawler/error.hpp"

namespace crawler {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
constexpr double kGridStep = 0.5;       // degrees
constexpr double kMinStep = 1e-4;       // degrees
constexpr double kClosureTol = 1e-8;
constexpr double kJumpLimit = 10.0;     // degrees
constexpr std::array<int, 4> kLoopOrder{1, 2, 3, 0};

using Gamma = std::array<double, 4>;

Eigen::Vector3d axis_of(const CreasePattern& p, int k) {
  return {p.creases[k].direction.x(), p.creases[k].direction.y(), 0.0};
}

Eigen::Matrix3d rotation(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Vector3d vee_skew_part(const Eigen::Matrix3d& m) {
  return 0.5 * Eigen::Vector3d(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

Eigen::Matrix3d loop_product(const CreasePattern& p, const Gamma& g) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  for (int k : kLoopOrder) m = m * rotation(axis_of(p, k), g[k]);
  return m;
}

bool on_branch(const CreasePattern& p, const Gamma& g) {
  for (int k = 0; k < 4; ++k) {
    const bool valley = k == p.valley();
    if (valley ? g[k] <= 0.0 : g[k] >= 0.0) return false;
    if (std::abs(g[k]) >= kPi) return false;
  }
  return true;
}

// Newton on the three free deviations with the valley held at its target.
std::optional<Gamma> newton(const CreasePattern& p, Gamma g) {
  const int v = p.valley();
  std::array<int, 3> free{};
  for (int k = 0, c = 0; k < 4; ++k)
    if (k != v) free[c++] = k;

  std::array<Eigen::Vector3d, 4> axes;
  for (int k = 0; k < 4; ++k) axes[k] = axis_of(p, k);

  for (int iter = 0; iter < 60; ++iter) {
    std::array<Eigen::Matrix3d, 4> r;
    for (int k = 0; k < 4; ++k) r[k] = rotation(axes[k], g[k]);
    // prefix[i] = product of the first i loop factors.
    std::array<Eigen::Matrix3d, 5> prefix;
    prefix[0].setIdentity();
    for (int i = 0; i < 4; ++i) prefix[i + 1] = prefix[i] * r[kLoopOrder[i]];
    const Eigen::Matrix3d& m = prefix[4];
    const Eigen::Vector3d res = vee_skew_part(m);

    Eigen::Matrix3d jac;
    for (int c = 0; c < 3; ++c) {
      const int k = free[c];
      int pos = 0;
      while (kLoopOrder[pos] != k) ++pos;
      Eigen::Matrix3d suffix = Eigen::Matrix3d::Identity();
      for (int i = pos + 1; i < 4; ++i) suffix = suffix * r[kLoopOrder[i]];
      const Eigen::Matrix3d dm = prefix[pos] * skew(axes[k]) * r[k] * suffix;
      jac.col(c) = vee_skew_part(dm);
    }
    const Eigen::Vector3d dx = jac.fullPivLu().solve(-res);
    if (!dx.allFinite()) return std::nullopt;
    for (int c = 0; c < 3; ++c) g[free[c]] += dx[c];
    if (dx.norm() < 1e-15) break;
  }
  if (!on_branch(p, g)) return std::nullopt;
  if ((loop_product(p, g) - Eigen::Matrix3d::Identity()).norm() >= kClosureTol)
    return std::nullopt;
  return g;
}

Gamma scaled(const Gamma& g, int valley, double target) {
  Gamma out = g;
  const double s = target / g[valley];
  for (double& x : out) x *= s;
  out[valley] = target;
  return out;
}

std::array<double, 4> to_rho(const Gamma& g) {
  std::array<double, 4> rho{};
  for (int k = 0; k < 4; ++k) rho[k] = 180.0 - std::abs(g[k]) / kDeg;
  return rho;
}

long long key_of(double beta_deg) { return std::llround(beta_deg * 1e6); }

// Follows the branch from (from_beta, from_gamma) to to_beta, subdividing the
// step whenever Newton fails. prev supplies a secant predictor when present.
Gamma continue_branch(const CreasePattern& p, const std::array<double, 4>& direction,
                      double from_beta, Gamma from_gamma, std::optional<Gamma> prev,
                      std::optional<double> prev_beta, double to_beta) {
  const int v = p.valley();
  double beta = from_beta;
  Gamma g = from_gamma;
  while (beta > to_beta) {
    double step = std::min(kGridStep, beta - to_beta);
    bool done = false;
    while (!done) {
      const double next = (step >= beta - to_beta) ? to_beta : beta - step;
      const double target = (180.0 - next) * kDeg;
      Gamma seed;
      if (beta >= 180.0) {
        for (int k = 0; k < 4; ++k) seed[k] = direction[k] * target;
      } else if (prev && *prev_beta > beta) {
        const double t = (beta - next) / (*prev_beta - beta);
        for (int k = 0; k < 4; ++k) seed[k] = g[k] + t * (g[k] - (*prev)[k]);
        seed[v] = target;
      } else {
        seed = scaled(g, v, target);
      }
      if (auto sol = newton(p, seed)) {
        prev = g;
        prev_beta = beta;
        g = *sol;
        beta = next;
        done = true;
      } else {
        step *= 0.5;
        if (step < kMinStep)
          throw NoClosure("fold branch ends near beta = " + std::to_string(beta) + " deg");
      }
    }
  }
  return g;
}

}  // namespace

std::array<double, 4> fold_deviation(const CreasePattern& p, const std::array<double, 4>& rho_deg) {
  Gamma g{};
  for (int k = 0; k < 4; ++k) {
    const double sign = (k == p.valley()) ? 1.0 : -1.0;
    g[k] = sign * (180.0 - rho_deg[k]) * kDeg;
  }
  return g;
}

double closure_residual(const CreasePattern& p, const std::array<double, 4>& rho_deg) {
  return (loop_product(p, fold_deviation(p, rho_deg)) - Eigen::Matrix3d::Identity()).norm();
}

std::array<double, 4> flat_branch_direction(const CreasePattern& p) {
  // First order: sum gamma_k e_k = 0 leaves a two-dimensional null space.
  // Second order: the quadratic form sum_{i<j} gamma_i gamma_j sin(phi_j - phi_i)
  // must vanish, which picks two directions inside that null space.
  Eigen::Matrix<double, 2, 4> e;
  std::array<double, 4> phi{};
  for (int k = 0; k < 4; ++k) {
    phi[k] = p.creases[k].angle;
    e(0, k) = std::cos(phi[k]);
    e(1, k) = std::sin(phi[k]);
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(e, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 4, 2> null = svd.matrixV().rightCols<2>();
  Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) q(i, j) = q(j, i) = 0.5 * std::sin(phi[j] - phi[i]);
  const Eigen::Matrix2d reduced = null.transpose() * q * null;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(reduced);
  const Eigen::Vector2d w = eig.eigenvalues();
  const Eigen::Matrix2d vecs = eig.eigenvectors();
  if (w[0] * w[1] >= 0.0) throw NoClosure("no fold branch leaves the flat state");

  const int v = p.valley();
  for (double sign : {1.0, -1.0}) {
    const Eigen::Vector2d u = vecs.col(0) * std::sqrt(std::abs(w[1])) +
                              sign * vecs.col(1) * std::sqrt(std::abs(w[0]));
    Eigen::Vector4d d = null * u;
    if (std::abs(d[v]) < 1e-12) continue;
    d /= d[v];
    bool ok = true;
    for (int k = 0; k < 4; ++k)
      if (k != v && !(d[k] < 0.0)) ok = false;
    if (ok) return {d[0], d[1], d[2], d[3]};
  }
  throw NoClosure("crease " + std::to_string(v + 1) + " cannot be the only valley fold");
}

std::array<double, 4> solve_fold_angles(const CreasePattern& p, double beta_deg,
                                        const std::optional<BranchHint>& hint) {
  if (!(beta_deg > 0.0 && beta_deg <= 180.0))
    throw NoClosure("beta must lie in (0, 180] degrees");
  if (beta_deg >= 180.0) return {180.0, 180.0, 180.0, 180.0};
  const int v = p.valley();
  const double target = (180.0 - beta_deg) * kDeg;

  const bool hint_folded = hint && hint->rho_deg[v] < 180.0;
  if (!hint_folded) {
    const auto dir = flat_branch_direction(p);
    auto rho = to_rho(continue_branch(p, dir, 180.0, Gamma{}, std::nullopt, std::nullopt, beta_deg));
    rho[v] = beta_deg;
    return rho;
  }
  const Gamma seed = scaled(fold_deviation(p, hint->rho_deg), v, target);
  const auto sol = newton(p, seed);
  if (!sol) throw NoClosure("no closure near the hinted branch at beta = " +
                            std::to_string(beta_deg) + " deg");
  auto rho = to_rho(*sol);
  rho[v] = beta_deg;
  for (int k = 0; k < 4; ++k)
    if (std::abs(rho[k] - hint->rho_deg[k]) > kJumpLimit)
      throw BranchJump("fold angle " + std::to_string(k + 1) + " moved more than 10 deg");
  return rho;
}

FoldState fold_geometry(const CreasePattern& p, const std::array<double, 4>& rho_deg,
                        double beta_deg) {
  FoldState s;
  s.beta_deg = beta_deg;
  s.rho_deg = rho_deg;
  const Gamma g = fold_deviation(p, rho_deg);
  for (int k = 0; k < 4; ++k) s.mv_signs[k] = (k == p.valley()) ? -1 : 1;

  s.panel_rotation[0].setIdentity();
  for (int k = 1; k < 4; ++k)
    s.panel_rotation[k] = s.panel_rotation[k - 1] * rotation(axis_of(p, k), g[k]);

  const Eigen::Vector3d c(p.center().x(), p.center().y(), 0.0);
  auto place = [&](int panel, const Eigen::Vector2d& q) {
    const Eigen::Vector3d local(q.x(), q.y(), 0.0);
    return Eigen::Vector3d(s.panel_rotation[panel] * (local - c) + c);
  };
  for (int id = 0; id < kNumVertices; ++id)
    s.vertices[id] = place(p.owner_panel(id), p.flat_vertices[id]);

  double area = 0.0;
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
  for (int k = 0; k < 4; ++k) {
    area += p.panels[k].area;
    moment += p.panels[k].area * place(k, p.panels[k].centroid);
  }
  s.com = moment / area;
  return s;
}

FoldTracker::FoldTracker(CreasePattern pattern)
    : pattern_(std::move(pattern)), direction_(flat_branch_direction(pattern_)) {
  gamma_[key_of(180.0)] = Gamma{};
}

const FoldState& FoldTracker::at(double beta_deg) {
  if (!(beta_deg > 0.0 && beta_deg <= 180.0))
    throw NoClosure("beta must lie in (0, 180] degrees");
  const long long key = key_of(beta_deg);
  if (auto it = states_.find(key); it != states_.end()) return it->second;

  // Walk the 0.5 degree grid down to the last grid point at or above beta.
  const int grid_index = static_cast<int>(std::floor((180.0 - beta_deg) / kGridStep + 1e-9));
  for (int i = 1; i <= grid_index; ++i) {
    const double b = 180.0 - kGridStep * i;
    if (gamma_.count(key_of(b))) continue;
    const double b_prev = b + kGridStep;
    const Gamma& g_prev = gamma_.at(key_of(b_prev));
    std::optional<Gamma> before;
    std::optional<double> before_beta;
    if (i >= 2) {
      before = gamma_.at(key_of(b_prev + kGridStep));
      before_beta = b_prev + kGridStep;
    }
    gamma_[key_of(b)] = continue_branch(pattern_, direction_, b_prev, g_prev, before,
                                        before_beta, b);
  }
  if (!gamma_.count(key)) {
    const double b_grid = 180.0 - kGridStep * grid_index;
    gamma_[key] = continue_branch(pattern_, direction_, b_grid, gamma_.at(key_of(b_grid)),
                                  std::nullopt, std::nullopt, beta_deg);
  }
  const Gamma& g = gamma_.at(key);
  std::array<double, 4> rho = beta_deg >= 180.0 ? std::array<double, 4>{180, 180, 180, 180}
                                                 : to_rho(g);
  rho[pattern_.valley()] = beta_deg;
  return states_.emplace(key, fold_geometry(pattern_, rho, beta_deg)).first->second;
}

void to_json(nlohmann::json& j, const FoldState& s) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : s.vertices) verts.push_back({v.x(), v.y(), v.z()});
  j = nlohmann::json{{"beta_deg", s.beta_deg},
                     {"rho_deg", s.rho_deg},
                     {"vertices_mm", verts},
                     {"com_mm", {s.com.x(), s.com.y(), s.com.z()}}};
}

}  // namespace crawler
