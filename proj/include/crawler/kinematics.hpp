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

/// \file kinematics.hpp
/// Rigid folding of the degree-four vertex.
///
/// Fold deviation of crease k: gamma_k = sign_k * (180 - rho_k), a right-handed
/// rotation about the crease direction through the central vertex. The valley
/// has gamma > 0 (the panels rise towards +z), the mountains gamma < 0.
/// Panel 0 is fixed in the body frame; panel k is carried by
/// T_k = T_{k-1} * R(e_k, gamma_k), and closure requires T_3 * R(e_0, gamma_0) = I.

#pragma once

#include <array>
#include <map>
#include <optional>

#include <Eigen/Core>
#include <json.hpp>

#include "crawler/pattern.hpp"

namespace crawler {

struct BranchHint {
  std::array<double, 4> rho_deg{180.0, 180.0, 180.0, 180.0};
};

struct FoldState {
  double beta_deg = 180.0;
  std::array<double, 4> rho_deg{180.0, 180.0, 180.0, 180.0};
  std::array<int, 4> mv_signs{};  // +1 mountain, -1 valley
  std::array<Eigen::Vector3d, kNumVertices> vertices;
  std::array<Eigen::Matrix3d, kNumCreases> panel_rotation;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();

  bool is_flat() const { return beta_deg >= 180.0; }
};

/// Signed fold deviations (radians) for dihedral angles under the pattern's
/// mountain/valley assignment.
std::array<double, 4> fold_deviation(const CreasePattern& p, const std::array<double, 4>& rho_deg);

/// Frobenius norm of (loop product - I).
double closure_residual(const CreasePattern& p, const std::array<double, 4>& rho_deg);

/// Unit fold-deviation direction of the branch leaving the flat state, scaled
/// so the valley entry is 1. Throws NoClosure when the valley crease cannot be
/// the only valley of a rigid motion.
std::array<double, 4> flat_branch_direction(const CreasePattern& p);

/// Dihedral angles at the driven angle beta (degrees, in (0, 180]).
/// Without a hint the branch is followed from the flat state in 0.5 degree
/// steps. With a hint a single Newton solve is seeded from it and BranchJump is
/// thrown when any angle moves by more than 10 degrees.
std::array<double, 4> solve_fold_angles(const CreasePattern& p, double beta_deg,
                                        const std::optional<BranchHint>& hint = std::nullopt);

FoldState fold_geometry(const CreasePattern& p, const std::array<double, 4>& rho_deg,
                        double beta_deg);
inline FoldState fold_geometry(const CreasePattern& p, const std::array<double, 4>& rho_deg) {
  return fold_geometry(p, rho_deg, rho_deg[p.valley()]);
}

/// True when two panels that share only the central vertex intersect, or when
/// any dihedral reaches zero (panels folded onto each other).
bool detect_self_intersection(const CreasePattern& p, const FoldState& s);

/// Triangle-triangle overlap in 3D. Shared boundary points count as overlap.
bool triangles_intersect(const Eigen::Vector3d& a0, const Eigen::Vector3d& a1,
                         const Eigen::Vector3d& a2, const Eigen::Vector3d& b0,
                         const Eigen::Vector3d& b1, const Eigen::Vector3d& b2);

/// Caches branch solutions for one pattern so repeated queries along a sweep
/// of beta are cheap. Not thread safe; use one tracker per design.
class FoldTracker {
 public:
  explicit FoldTracker(CreasePattern pattern);

  const CreasePattern& pattern() const { return pattern_; }
  const FoldState& at(double beta_deg);

 private:
  std::array<double, 4> solve_from(double from_beta, const std::array<double, 4>& from_gamma,
                                   double to_beta) const;

  CreasePattern pattern_;
  std::array<double, 4> direction_;
  std::map<long long, std::array<double, 4>> gamma_;  // keyed by beta in microdegrees
  std::map<long long, FoldState> states_;
};

void to_json(nlohmann::json& j, const FoldState& s);

}  // namespace crawler
