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

/// \file gait.hpp
/// Actuation cycles, trajectories and crawling-mode classification.
///
/// Inflation refolds the sheet with its COM position and heading frozen;
/// deflation advances it one stick-slip step per beta increment.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "crawler/contact.hpp"
#include "crawler/kinematics.hpp"
#include "crawler/pattern.hpp"
#include "crawler/statics.hpp"

namespace crawler {

struct ActuationSchedule {
  double beta_max = 180.0;
  double beta_min = 120.0;
  double dbeta = 0.5;
  int cycles = 1;

  /// Throws InvalidDesign unless 120 <= beta_min < beta_max <= 180 and dbeta > 0.
  void validate() const;
};

enum class Phase { Inflation, Deflation };
enum class EventKind { ContactChange, TipOver };

struct TrajectorySample {
  int step = 0;
  Phase phase = Phase::Inflation;
  double beta_deg = 180.0;
  Eigen::Vector2d com_xy = Eigen::Vector2d::Zero();
  double heading = 0.0;  // radians
  std::vector<int> contact_ids;
  int anchor_id = -1;     // sticking vertex of a deflation step, -1 otherwise
  int partner_id = -1;    // second sticking vertex when an edge anchors
  bool anchored = true;   // false when no contact could stick
  std::vector<ContactForce> forces;
  std::optional<EventKind> event;
  // Deflation steps: heading change of one small actuation cycle between the
  // previous beta and this one (the inflation back plus this step), rad.
  double cycle_turn = 0.0;
};

struct TrajectoryEvent {
  EventKind kind = EventKind::ContactChange;
  Phase phase = Phase::Inflation;
  double beta_deg = 0.0;
  int step = 0;
  std::vector<int> from_ids;
  std::vector<int> to_ids;
};

enum class FailureReason { None, NoFoldBranch, CannotStand, FacetCollision, NoAnchor };

std::string to_string(FailureReason r);
std::string to_string(Phase p);
std::string to_string(EventKind k);

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<TrajectoryEvent> events;
  FailureReason failure = FailureReason::None;
  std::string failure_message;

  bool ok() const { return failure == FailureReason::None; }
};

struct GaitOptions {
  FrictionModel friction;
  double weight = 1.0;
  bool allow_unanchored = false;
};

/// Stateful simulator for one design. Keeps the fold-branch cache between
/// phases so repeated cycles are cheap.
class Gait {
 public:
  explicit Gait(const VertexDesign& d);

  const CreasePattern& pattern() const { return tracker_.pattern(); }
  const FoldState& shape(double beta_deg);

  /// Pose at beta with heading 0, resting on the facet below the COM.
  RestPose initial_pose(double beta_deg);

  /// Samples are appended to out (excluding the starting pose).
  RestPose run_inflation(RestPose pose, double from_beta, double to_beta, double dbeta,
                         Trajectory& out);
  RestPose run_deflation(RestPose pose, double from_beta, double to_beta, double dbeta,
                         const GaitOptions& options, Trajectory& out);

 private:
  const FoldState& checked_shape(double beta_deg);
  RestPose reseat(const RestPose& prev, const RestPose& next, const FoldState& s) const;
  void append(Trajectory& out, Phase phase, double beta, const RestPose& pose,
              const RestPose& prev, const StepSolution* step);

  FoldTracker tracker_;
};

/// Alternates inflation and deflation from the resting pose at beta_max.
/// Errors end the run; the partial trajectory carries the failure reason.
Trajectory run_cycles(const VertexDesign& d, const ActuationSchedule& schedule,
                      const GaitOptions& options);

struct CurvatureProfile {
  std::vector<double> kappa;   // per sample, 1/mm; zero at the ends
  double kappa_total = 0.0;    // sum of |tangent turn|, rad
  double length = 0.0;         // arc length, mm
  double chord = 0.0;          // end-to-end distance, mm
  double alpha_deg = 0.0;      // mean tangent direction
};

/// Three-point curvature of a polyline. Throws TooShort below three points.
CurvatureProfile curvature_profile(const std::vector<Eigen::Vector2d>& path);

enum class ModeKind { Straight, Left, Right };
std::string to_string(ModeKind k);
ModeKind parse_mode_kind(const std::string& s);  // throws FormatError

inline constexpr double kStraightCurvature = 5e-3;  // 1/mm
inline constexpr int kMinModeSamples = 5;

struct Mode {
  ModeKind kind = ModeKind::Straight;
  double beta_lo = 0.0;
  double beta_hi = 0.0;
  double length = 0.0;      // mm, arc length of the COM path
  double chord = 0.0;       // mm
  double alpha_deg = 0.0;   // mean tangent direction in the initial frame
  double kappa_total = 0.0; // rad
  int n_change = 0;
  int samples = 0;
};

enum class ModeCategory {
  None,
  SingleStraight,
  SingleTurn,
  StraightAndTurn,
  LeftAndRight,
  TwoStraight,
  ThreePlus,
};
std::string to_string(ModeCategory c);
ModeCategory parse_mode_category(const std::string& s);  // throws FormatError

struct ModeReport {
  std::vector<Mode> modes;  // distinct modes after clustering
  std::vector<Mode> runs;   // contiguous beta intervals before clustering
  int n_change_total = 0;
  int unanchored_steps = 0;
  double length_total = 0.0;   // L over the whole deflation
  double kappa_total = 0.0;    // over the whole deflation
  FailureReason failure = FailureReason::None;
  std::string failure_message;
  ModeCategory category = ModeCategory::None;

  bool crawls() const { return failure == FailureReason::None && !modes.empty(); }
  double length_min() const;
  double length_sum() const;
};

struct ClassifyOptions {
  // Steps where nothing sticks are simulated and then left out of the modes.
  GaitOptions gait{.friction = {}, .weight = 1.0, .allow_unanchored = true};
  double beta_min = 120.0;
  double beta_max = 180.0;
  double dbeta = 0.5;
};

/// One canonical cycle (beta_max -> beta_min -> beta_max); the deflation path
/// is cut into straight, left and right intervals. Unanchored steps split the
/// path and are not part of any mode; NoAnchor is reported when nothing is left.
ModeReport classify_modes(const VertexDesign& d, const ClassifyOptions& options);

/// Classifies the first deflation of a simulated run; failures pass through.
ModeReport classify_trajectory(const Trajectory& t);

/// Classification of an already simulated deflation (samples in increasing beta).
ModeReport classify_deflation(const std::vector<TrajectorySample>& deflation, int n_change);

void write_trajectory_csv(const Trajectory& t, const std::filesystem::path& path);
void write_forces_csv(const Trajectory& t, const std::filesystem::path& path);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const Mode& m);
void from_json(const nlohmann::json& j, Mode& m);  // throws FormatError on unknown kinds
void to_json(nlohmann::json& j, const ModeReport& r);

}  // namespace crawler
