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

/// \file plot.hpp
/// Charts of trajectories, contact friction and sweep results.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "crawler/gait.hpp"
#include "crawler/statics.hpp"
#include "crawler/sweep.hpp"

namespace crawler {

enum class PlotKind {
  Trajectory,          // trajectory CSV (+ modes.json beside it)
  FrictionVsBeta,      // forces CSV
  TaxonomyBars,        // taxonomy JSON or sweep records
  ScatterLVsKappaT,    // sweep records
  ScatterAlphaVsLmin,  // sweep records
  ScatterLminVsLT,     // sweep records
};

std::string to_string(PlotKind k);
PlotKind parse_plot_kind(const std::string& s);  // throws FormatError
std::vector<std::string> plot_kind_names();

struct ForceRow {
  int step = 0;
  double beta_deg = 0.0;
  int vertex_id = 0;
  ContactState state = ContactState::Slip;
  double normal = 0.0;
  double capacity = 0.0;
  Eigen::Vector2d tangential = Eigen::Vector2d::Zero();
};

/// Reads the file written by write_forces_csv. Throws FormatError.
std::vector<ForceRow> read_forces_csv(const std::filesystem::path& path);

/// Modes are optional; with them deflation samples are coloured by mode.
std::string trajectory_svg(const Trajectory& t, const std::vector<Mode>& modes = {});
std::string friction_svg(const std::vector<ForceRow>& rows);
std::string taxonomy_svg(const Taxonomy& t);
/// One of the scatter kinds over crawling designs with N_change < 2.
std::string scatter_svg(PlotKind kind, const std::vector<DesignRecord>& records);

/// Reads the input for the kind and writes the SVG. Input problems throw
/// FormatError; failing to write throws IoError.
void render_plot(PlotKind kind, const std::filesystem::path& in, const std::filesystem::path& out);

}  // namespace crawler
