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

// Helpers shared by the unit tests and the acceptance runner. The oracles in
// here are written against first principles and do not call the library's
// own solvers.

#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "crawler/error.hpp"
#include "crawler/gait.hpp"
#include "crawler/kinematics.hpp"
#include "crawler/pattern.hpp"
#include "crawler/statics.hpp"

namespace crawler::testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDegToRad = kPi / 180.0;

inline std::filesystem::path source_dir() { return CRAWLER_SOURCE_DIR; }

inline std::filesystem::path fixture(const std::string& roman) {
  return source_dir() / "fixtures" / "designs" / ("design_" + roman + ".json");
}

inline VertexDesign fixture_design(const std::string& roman) { return load_design(fixture(roman)); }

// Fresh scratch directory under the build tree's temp area.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("crawler_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Sector angles and vertex placement drawn uniformly until the design passes
// the feasibility conditions, checked here directly rather than via
// validate_design.
inline VertexDesign random_feasible_design(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sector(15.0, 175.0), turn(0.0, 360.0), frac(0.15, 0.85);
  for (;;) {
    VertexDesign d;
    d.b = 90.0;
    d.h = std::uniform_int_distribution<int>(0, 1)(rng) ? 90.0 : 135.0;
    d.theta = {sector(rng), sector(rng), sector(rng)};
    const double last = 360.0 - d.theta[0] - d.theta[1] - d.theta[2];
    if (last <= 5.0 || last >= 175.0) continue;
    d.theta_v = turn(rng);
    d.xv = frac(rng) * d.b;
    d.yv = frac(rng) * d.h;
    d.valley_index = 3;
    return d;
  }
}

// Random feasible design whose valley assignment folds from flat down to
// beta_min without losing the branch.
inline VertexDesign random_folding_design(std::mt19937_64& rng, double beta_min = 120.0) {
  for (;;) {
    const VertexDesign d = random_feasible_design(rng);
    try {
      FoldTracker tracker(build_pattern(d));
      for (double beta = 180.0; beta >= beta_min; beta -= 0.5) tracker.at(beta);
      return d;
    } catch (const CrawlerError&) {
    }
  }
}

// Shoelace area of a simple polygon.
inline double polygon_area(const std::vector<Eigen::Vector2d>& pts) {
  double a = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

// Rodrigues rotation about a unit axis.
inline Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle) {
  Eigen::Matrix3d k;
  k << 0.0, -axis.z(), axis.y(), axis.z(), 0.0, -axis.x(), -axis.y(), axis.x(), 0.0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

// Loop closure of a four-crease vertex: walking around the vertex and
// rotating about each flat crease direction by its signed fold deviation must
// return to the identity. Valley deviations are positive, mountain negative.
struct ClosureOracle {
  std::array<double, 4> crease_angle{};  // flat crease directions, rad
  int valley = 2;

  explicit ClosureOracle(const VertexDesign& d) : valley(d.valley_index - 1) {
    double a = d.theta_v;
    const auto s = d.sectors();
    for (int k = 0; k < 4; ++k) {
      crease_angle[k] = a * kDegToRad;
      a += s[k];
    }
  }

  Eigen::Matrix3d loop(const std::array<double, 4>& rho_deg) const {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    for (int k = 0; k < 4; ++k) {
      const double sign = k == valley ? 1.0 : -1.0;
      const Eigen::Vector3d axis(std::cos(crease_angle[k]), std::sin(crease_angle[k]), 0.0);
      m = m * rodrigues(axis, sign * (180.0 - rho_deg[k]) * kDegToRad);
    }
    return m;
  }

  double residual(const std::array<double, 4>& rho_deg) const {
    return (loop(rho_deg) - Eigen::Matrix3d::Identity()).norm();
  }

  // Levenberg-Marquardt over the three undriven fold angles with a forward
  // difference Jacobian, starting from seed. Returns the minimiser.
  std::array<double, 4> minimise(std::array<double, 4> rho, int iterations = 200) const {
    auto residual_vec = [&](const std::array<double, 4>& r) {
      const Eigen::Matrix3d e = loop(r) - Eigen::Matrix3d::Identity();
      return Eigen::Map<const Eigen::Matrix<double, 9, 1>>(e.data()).eval();
    };
    std::array<int, 3> free{};
    for (int k = 0, i = 0; k < 4; ++k)
      if (k != valley) free[i++] = k;
    double lambda = 1e-3;
    Eigen::Matrix<double, 9, 1> f = residual_vec(rho);
    for (int it = 0; it < iterations && f.norm() > 1e-15; ++it) {
      Eigen::Matrix<double, 9, 3> jac;
      for (int i = 0; i < 3; ++i) {
        auto r = rho;
        const double h = 1e-7;
        r[free[i]] += h;
        jac.col(i) = (residual_vec(r) - f) / h;
      }
      const Eigen::Matrix3d jtj = jac.transpose() * jac;
      const Eigen::Vector3d g = jac.transpose() * f;
      for (int tries = 0; tries < 30; ++tries) {
        Eigen::Matrix3d a = jtj;
        a.diagonal() *= 1.0 + lambda;
        const Eigen::Vector3d step = a.ldlt().solve(-g);
        auto r = rho;
        for (int i = 0; i < 3; ++i) r[free[i]] += step[i];
        const auto fr = residual_vec(r);
        if (fr.norm() < f.norm()) {
          rho = r;
          f = fr;
          lambda = std::max(lambda * 0.3, 1e-12);
          break;
        }
        lambda *= 10.0;
      }
    }
    return rho;
  }
};

// Barycentric coordinates of p in triangle abc from a direct 3x3 solve.
inline Eigen::Vector3d barycentric(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const Eigen::Vector2d& c, const Eigen::Vector2d& p) {
  Eigen::Matrix3d m;
  m << 1.0, 1.0, 1.0, a.x(), b.x(), c.x(), a.y(), b.y(), c.y();
  return m.colPivHouseholderQr().solve(Eigen::Vector3d(1.0, p.x(), p.y()));
}

inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline double signed_angle(const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
  return std::atan2(cross2(from, to), from.dot(to));
}

// COM position at the end of each deflation phase, preceded by the start.
inline std::vector<Eigen::Vector2d> cycle_ends(const Trajectory& t) {
  std::vector<Eigen::Vector2d> ends;
  if (t.samples.empty()) return ends;
  ends.push_back(t.samples.front().com_xy);
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    const bool last_of_deflation =
        t.samples[i].phase == Phase::Deflation &&
        (i + 1 == t.samples.size() || t.samples[i + 1].phase != Phase::Deflation);
    if (last_of_deflation) ends.push_back(t.samples[i].com_xy);
  }
  return ends;
}

// Heading at the end of each deflation phase, preceded by the start.
inline std::vector<double> cycle_headings(const Trajectory& t) {
  std::vector<double> out;
  if (t.samples.empty()) return out;
  out.push_back(t.samples.front().heading);
  for (std::size_t i = 0; i < t.samples.size(); ++i)
    if (t.samples[i].phase == Phase::Deflation &&
        (i + 1 == t.samples.size() || t.samples[i + 1].phase != Phase::Deflation))
      out.push_back(t.samples[i].heading);
  return out;
}

// Vertex id under the left-right mirror of the sheet.
inline int mirrored_vertex(int id) {
  static constexpr std::array<int, kNumVertices> map{3, 2, 1, 0, 4, 8, 7, 6, 5};
  return map[id];
}

// Equilibrium audit of one stick-slip step, recomputed from the returned
// forces and contact positions.
struct StepAudit {
  double force_residual = 0.0;   // |sum f_t| / W
  double moment_residual = 0.0;  // |sum (q_j - q_a) x f_j| / (W b), about the anchor
  double stick_excess = 0.0;     // max(|f_t| - F_s) over sticking contacts, / W
  double slip_error = 0.0;       // max |f_t + F_s du/|du|| over slipping contacts, / W
  int sticking = 0;
};

inline StepAudit audit_step(const SlipProblem& pb, const StepSolution& sol) {
  StepAudit a;
  const double w = pb.weight, b = pb.length_scale;
  std::size_t anchor = 0;
  for (std::size_t j = 0; j < pb.contacts.size(); ++j)
    if (pb.contacts[j].vertex_id == sol.anchor_id) anchor = j;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  double moment = 0.0;
  for (std::size_t j = 0; j < pb.contacts.size(); ++j) {
    const auto& f = sol.contact_forces[j];
    const double capacity = pb.contacts[j].mu * pb.contacts[j].normal;
    sum += f.tangential;
    moment += cross2(sol.next_world[j] - sol.next_world[anchor], f.tangential);
    if (f.state == ContactState::Stick) {
      ++a.sticking;
      a.stick_excess = std::max(a.stick_excess, (f.tangential.norm() - capacity) / w);
    } else {
      const Eigen::Vector2d du = sol.next_world[j] - pb.contacts[j].prev_world;
      const Eigen::Vector2d expected = du.norm() > 1e-12 * b ? Eigen::Vector2d(-capacity * du.normalized())
                                                             : Eigen::Vector2d::Zero();
      a.slip_error = std::max(a.slip_error, (f.tangential - expected).norm() / w);
    }
  }
  a.force_residual = sum.norm() / w;
  a.moment_residual = std::abs(moment) / (w * b);
  return a;
}

inline bool step_is_balanced(const StepAudit& a) {
  return a.force_residual < 1e-9 && a.moment_residual < 1e-9 && a.stick_excess <= 1e-12 &&
         a.slip_error < 1e-9;
}

// Real stick-slip problems from the canonical deflation of a design: the
// pose before each step together with the next shape. Steps whose contact
// set changes are skipped because the problem is then posed on the new set.
inline std::vector<SlipProblem> deflation_problems(const VertexDesign& d, const FrictionModel& friction,
                                                   double weight, double dbeta = 0.5) {
  std::vector<SlipProblem> out;
  Gait gait(d);
  GaitOptions options{.friction = friction, .weight = weight, .allow_unanchored = true};
  Trajectory scratch;
  RestPose pose = gait.initial_pose(180.0);
  pose = gait.run_inflation(pose, 180.0, 120.0, dbeta, scratch);
  for (double beta = 120.0 + dbeta; beta <= 180.0 + 1e-9; beta += dbeta) {
    try {
      out.push_back(make_slip_problem(gait.pattern(), pose, gait.shape(beta), friction, weight));
    } catch (const Degenerate&) {
    }
    pose = gait.run_deflation(pose, beta - dbeta, beta, dbeta, options, scratch);
  }
  return out;
}

}  // namespace crawler::testing
