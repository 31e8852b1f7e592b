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

/// \file pattern.hpp
/// Flat crease pattern of a single degree-four vertex cut from a rectangle.
///
/// Sheet frame: origin at the lower-left corner, +x along the width b,
/// +y along the height h. Crease k (1-based) leaves the central vertex at the
/// angle theta_v + theta_1 + ... + theta_{k-1}, measured counterclockwise from
/// +x. Sector k lies between crease k and crease k+1 and spans theta_k.
///
/// Vertex ids (0-based, printed as v1..v9):
///   0..3  crease-boundary intersections of creases 1..4   (v1..v4)
///   4     central vertex                                  (v5)
///   5..8  corners (b,0), (b,h), (0,h), (0,0)              (v6..v9)

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace crawler {

inline constexpr int kNumVertices = 9;
inline constexpr int kNumCreases = 4;
inline constexpr int kCentralVertex = 4;
inline constexpr int kFirstCorner = 5;

std::string vertex_label(int id);

struct VertexDesign {
  double b = 90.0;
  double h = 130.0;
  std::array<double, 3> theta{90.0, 90.0, 90.0};  // degrees
  double theta_v = 0.0;                             // degrees
  double xv = 45.0;
  double yv = 65.0;
  int valley_index = 3;  // 1..4
  double weight = 1.0;

  double theta4() const { return 360.0 - theta[0] - theta[1] - theta[2]; }
  std::array<double, 4> sectors() const { return {theta[0], theta[1], theta[2], theta4()}; }

  bool operator==(const VertexDesign&) const = default;
};

struct FeasibilityFlags {
  bool developable = false;
  bool rigidly_foldable = false;
  bool vertex_interior = false;
  double theta4 = 0.0;

  bool all() const { return developable && rigidly_foldable && vertex_interior; }
};

/// Never throws; each flag reports its own condition.
FeasibilityFlags validate_design(const VertexDesign& d);

enum class Fold { Mountain, Valley };

struct Crease {
  double angle = 0.0;  // radians, counterclockwise from +x
  Eigen::Vector2d direction = Eigen::Vector2d::UnitX();
  int end_vertex = 0;
  Fold fold = Fold::Mountain;
};

struct Panel {
  // Vertex ids counterclockwise, starting at the central vertex, then the
  // endpoint of the bounding crease k, any corners, and the endpoint of
  // crease k+1.
  std::vector<int> vertices;
  double area = 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
};

struct CreasePattern {
  VertexDesign design;
  std::array<Eigen::Vector2d, kNumVertices> flat_vertices;
  std::array<Crease, kNumCreases> creases;
  std::array<Panel, kNumCreases> panels;  // panel k lies between crease k and k+1
  std::array<double, 4> sector_deg{};

  int valley() const { return design.valley_index - 1; }
  Eigen::Vector2d center() const { return flat_vertices[kCentralVertex]; }
  /// Panels whose boundary contains the vertex.
  std::vector<int> panels_of_vertex(int id) const;
  /// Panel that carries the vertex in the folded geometry (the corner's own
  /// panel, panel k for the endpoint of crease k, panel 0 for the center).
  int owner_panel(int id) const;
};

/// Throws InvalidDesign when validate_design fails and DegenerateCrease when a
/// crease ray runs within 1e-6*b of a sheet corner.
CreasePattern build_pattern(const VertexDesign& d);

/// Reflection x -> b - x. Crease order reverses, so sectors become
/// (theta3, theta2, theta1, theta4) and the valley crease k maps to 5 - k.
VertexDesign mirror_design(const VertexDesign& d);

void to_json(nlohmann::json& j, const VertexDesign& d);
void from_json(const nlohmann::json& j, VertexDesign& d);

VertexDesign load_design(const std::filesystem::path& path);
void save_design(const VertexDesign& d, const std::filesystem::path& path);

}  // namespace crawler
