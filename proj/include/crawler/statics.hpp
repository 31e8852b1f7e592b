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

/// \file statics.hpp
/// Normal forces, Coulomb friction and the quasi-static stick-slip step.

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "crawler/contact.hpp"
#include "crawler/kinematics.hpp"

namespace crawler {

/// Static friction coefficient as a function of the contact face angle.
class FrictionModel {
 public:
  FrictionModel() = default;
  static FrictionModel constant(double mu_s);
  /// (psi_deg, mu_s) pairs; linear in between, flat outside.
  static FrictionModel table(std::vector<std::pair<double, double>> points);
  /// CSV with header psi_deg,mu_s.
  static FrictionModel load_csv(const std::filesystem::path& path);

  double mu(double psi_deg) const;
  bool is_constant() const { return points_.size() == 1; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<double, double>> points_{{0.0, 0.4}};
};

double static_friction(double normal, double psi_deg, const FrictionModel& m);

/// Barycentric split of the weight over three contacts. Throws Degenerate
/// when the triangle area is below 1e-6 * length_scale^2 and Unstable when the
/// COM lies outside the triangle.
std::array<double, 3> normal_forces(const std::array<Eigen::Vector2d, 3>& contacts,
                                    const Eigen::Vector2d& com, double weight,
                                    double length_scale);

/// Any number of contacts: the least-norm non-negative forces balancing the
/// weight about the COM. Reduces to normal_forces for three contacts.
std::vector<double> distribute_normal_forces(const std::vector<Eigen::Vector2d>& contacts,
                                             const Eigen::Vector2d& com, double weight,
                                             double length_scale);

enum class ContactState { Stick, Slip };

struct ContactForce {
  int vertex_id = 0;
  double normal = 0.0;
  double capacity = 0.0;  // mu_s * N
  Eigen::Vector2d tangential = Eigen::Vector2d::Zero();
  ContactState state = ContactState::Slip;
};

struct SlipContact {
  int vertex_id = 0;
  Eigen::Vector2d prev_world = Eigen::Vector2d::Zero();
  Eigen::Vector2d next_laid = Eigen::Vector2d::Zero();  // zero-heading laid frame
  double normal = 0.0;
  double mu = 0.4;
  std::vector<int> panels;  // panels containing this vertex
};

/// One deflation step: the shape changes from the previous world contact
/// positions to next_laid (up to a rigid motion in the plane).
struct SlipProblem {
  std::vector<SlipContact> contacts;
  Eigen::Vector2d next_com_laid = Eigen::Vector2d::Zero();
  Eigen::Vector2d prev_com = Eigen::Vector2d::Zero();
  double heading = 0.0;
  double weight = 1.0;
  double length_scale = 1.0;
};

struct StepOptions {
  std::optional<int> forced_anchor;   // vertex id
  std::optional<int> forced_partner;  // second vertex of a forced edge anchor
  bool allow_unanchored = false;     // return the least violating candidate instead of throwing
};

struct StepSolution {
  int anchor_id = -1;
  int partner_id = -1;  // other sticking endpoint when an edge anchors, else -1
  double dphi = 0.0;                                        // heading increment, rad
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();    // COM displacement, mm
  std::vector<ContactForce> contact_forces;
  std::vector<Eigen::Vector2d> next_world;                  // contact positions after the step
  Eigen::Vector2d com = Eigen::Vector2d::Zero();
  double stick_margin = 0.0;                                // (F_s - |f_t|) at the anchor
  bool anchored = true;
};

/// Tries each contact as the sticking anchor, solves the moment balance about it
/// for the heading increment and keeps the candidate whose friction demand fits
/// inside its capacity with the largest margin.
///
/// When no single contact can stick, two contacts on a common panel (an edge
/// resting on the substrate) are tried as a rigid anchor: both stick, which fixes
/// the heading, and the pair must absorb the net slip force and moment.
///
/// Throws NoRoot when no point candidate balances within +-20 deg and no edge
/// candidate exists, and NoAnchor when nothing can stick.
StepSolution solve_stick_slip(const SlipProblem& problem, const StepOptions& options = {});

/// Builds the problem from a pose and the next shape with the same contact set.
SlipProblem make_slip_problem(const CreasePattern& p, const RestPose& prev, const FoldState& next,
                              const FrictionModel& friction, double weight);

StepSolution solve_stick_slip(const CreasePattern& p, const RestPose& prev, const FoldState& next,
                              const FrictionModel& friction, double weight,
                              const StepOptions& options = {});

}  // namespace crawler
