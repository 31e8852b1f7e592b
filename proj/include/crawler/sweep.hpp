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

/// \file sweep.hpp
/// Design-space sweeps: grid enumeration, per-design evaluation, resumable
/// JSON Lines output and taxonomy aggregation.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "crawler/gait.hpp"
#include "crawler/pattern.hpp"

namespace crawler {

inline constexpr int kRecordSchemaVersion = 1;

/// Cartesian parameter grid. Defaults give 2 x 16^3 x 18 x 3 x 5 = 2,211,840
/// designs. Vertex offsets are fractions of b and may carry either sign; see
/// grid_vertex_position.
struct SweepGrid {
  double b = 90.0;
  std::vector<double> h_over_b{1.0, 1.5};
  std::vector<double> theta_deg{20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150, 160, 170};
  std::vector<double> theta_v_deg{10,  30,  50,  70,  90,  110, 130, 150, 170,
                                  190, 210, 230, 250, 270, 290, 310, 330, 350};
  std::vector<double> xv_over_b{-0.7, -0.5, -0.3};
  std::vector<double> yv_over_b{-1.2, -1.0, -0.8, -0.6, -0.4};
  int valley_index = 3;

  /// Throws InvalidDesign when a list is empty or b <= 0.
  void validate() const;
  std::uint64_t size() const;
  /// Lexicographic order: h, theta1, theta2, theta3, theta_v, xv, yv (yv fastest).
  VertexDesign design(std::uint64_t index) const;
};

/// Sheet-frame vertex position for grid offsets given as fractions of b.
/// Offsets are taken by magnitude; this is the only place the sign convention lives.
Eigen::Vector2d grid_vertex_position(double xv_over_b, double yv_over_b, double b);

void enumerate_grid(const SweepGrid& g,
                    const std::function<void(std::uint64_t, const VertexDesign&)>& visit);

/// 64-bit FNV-1a of the design parameters printed at full precision.
std::uint64_t design_id(const VertexDesign& d);
std::string design_id_hex(std::uint64_t id);

enum class Outcome {
  Infeasible,     // not developable, not rigidly foldable, or vertex off the sheet
  NoFoldBranch,   // the valley assignment admits no rigid motion
  CannotStand,
  FacetCollision,
  NoAnchor,
  Crawls,
  Error,          // unexpected failure, kept so every design lands in one bucket
};
std::string to_string(Outcome o);
Outcome parse_outcome(const std::string& s);  // throws FormatError

struct DesignRecord {
  std::uint64_t index = 0;
  std::uint64_t id = 0;
  VertexDesign design;
  FeasibilityFlags flags;
  Outcome outcome = Outcome::Infeasible;
  std::string message;
  int n_change = 0;
  ModeCategory category = ModeCategory::None;
  std::vector<Mode> modes;
  double kappa_total = 0.0;
  double length_total = 0.0;
  double length_min = 0.0;

  // Evaluated but left out of mode statistics.
  bool many_changes() const { return n_change > 2; }
};

/// Never throws: every failure is recorded in the outcome.
DesignRecord evaluate_design(const VertexDesign& d, const ClassifyOptions& options = {});

nlohmann::json record_to_json(const DesignRecord& r);
/// Throws SchemaMismatch for another schema_version and FormatError otherwise.
DesignRecord record_from_json(const nlohmann::json& j);
std::string record_line(const DesignRecord& r);  // one JSON line with trailing newline

std::vector<DesignRecord> read_records(const std::filesystem::path& path);

struct Taxonomy {
  std::uint64_t total = 0;
  std::uint64_t infeasible = 0;
  std::uint64_t no_fold_branch = 0;
  std::uint64_t cannot_stand = 0;
  std::uint64_t facet_collision = 0;
  std::uint64_t no_anchor = 0;
  std::uint64_t errors = 0;
  std::uint64_t crawls = 0;
  std::uint64_t many_changes = 0;  // crawling with N_change > 2
  std::uint64_t population = 0;    // crawling with N_change < 2; denominator of the fractions
  std::map<ModeCategory, std::uint64_t> categories;  // within the population
  // Every crawling design by N_change, then category.
  std::map<int, std::map<ModeCategory, std::uint64_t>> by_n_change;

  std::uint64_t foldable() const { return total - infeasible - no_fold_branch; }
  std::uint64_t count(ModeCategory c) const;
  double fraction(ModeCategory c) const;
  double single_mode_fraction() const;
  double two_mode_fraction() const;
  double three_mode_fraction() const;
};

Taxonomy aggregate(const std::vector<DesignRecord>& records);
void to_json(nlohmann::json& j, const Taxonomy& t);
void from_json(const nlohmann::json& j, Taxonomy& t);
/// Human-readable table.
std::string format_taxonomy(const Taxonomy& t);

void write_summary_csv(const std::vector<DesignRecord>& records, const std::filesystem::path& path);

struct SweepConfig {
  SweepGrid grid;
  ClassifyOptions classify;
  std::filesystem::path out = "sweep.jsonl";
  int workers = 1;
  std::optional<std::uint64_t> sample;  // seeded subsample of the grid
  std::uint64_t seed = 7;
  bool resume = false;
};

/// Reads a JSON config; see docs/formats.md. Relative paths resolve against
/// the config's directory. Throws FormatError, or IoError when unreadable.
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Grid indices to evaluate, ascending. With a sample size, a uniform subset
/// drawn with mt19937_64 seeded by seed.
std::vector<std::uint64_t> sweep_indices(const SweepGrid& g, std::optional<std::uint64_t> sample,
                                         std::uint64_t seed);

struct SweepStats {
  std::uint64_t planned = 0;
  std::uint64_t resumed = 0;    // records already present
  std::uint64_t evaluated = 0;  // records written by this run
};

using SweepProgress = std::function<void(std::uint64_t done, std::uint64_t planned)>;

/// Evaluates the planned designs with `workers` OpenMP threads and appends the
/// records in plan order. Output is flushed after each batch, so a killed run
/// leaves whole records plus at most one partial line, which resume drops.
/// Throws IoError on write failures and FormatError when resuming a file that
/// belongs to another plan.
SweepStats run_sweep(const SweepConfig& config, const SweepProgress& progress = {});

/// Single-threaded reference with the same output bytes.
SweepStats run_sweep_serial(const SweepConfig& config, const SweepProgress& progress = {});

}  // namespace crawler
