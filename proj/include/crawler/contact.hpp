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

/// \file contact.hpp
/// Resting poses of a folded sheet on a flat substrate.
///
/// A pose lays one facet of the convex hull of the nine vertices on z = 0.
/// The laid frame maps the facet normal to -z and then turns about z so the
/// footprint best matches the flat pattern; the world pose adds a heading and
/// an in-plane offset on top of that.

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "crawler/kinematics.hpp"
#include "crawler/pattern.hpp"

namespace crawler {

struct Facet {
  std::vector<int> ids;          // vertices on the supporting plane, sorted
  std::vector<int> polygon;      // support polygon, counterclockwise in the laid frame
  Eigen::Vector3d normal;        // outward unit normal, body frame
  double offset = 0.0;           // normal . x == offset on the plane
  double margin = 0.0;           // signed distance of the COM projection to the polygon edges
  int worst_edge = 0;            // polygon edge (polygon[i], polygon[i+1]) attaining margin
  bool admissible = false;       // faces the underside of the sheet
};

/// Every supporting plane of the hull, with contacts within tol of the plane.
std::vector<Facet> hull_facets(const CreasePattern& p, const FoldState& s, double tol = 1e-6);

/// Mean downward direction of the panels in the body frame.
Eigen::Vector3d underside_direction(const FoldState& s, const CreasePattern& p);

struct ContactPoint {
  int vertex_id = 0;
  Eigen::Vector2d world_xy = Eigen::Vector2d::Zero();
  std::vector<int> adjacent_panels;
  double psi_deg = 0.0;  // angle between the substrate and the contacting face
};

struct RestPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // body -> world
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  std::vector<ContactPoint> contacts;
  std::vector<Eigen::Vector2d> support_polygon;
  Eigen::Vector2d com_proj = Eigen::Vector2d::Zero();
  Eigen::Vector3d facet_normal = -Eigen::Vector3d::UnitZ();  // body frame
  Eigen::Vector3d canonical_normal = -Eigen::Vector3d::UnitZ();
  double margin = 0.0;
  double heading = 0.0;  // radians, turn of the laid frame about +z
  bool tipped = false;   // the facet was reached by tipping over an edge

  std::vector<int> contact_ids() const;
  Eigen::Vector3d to_world(const Eigen::Vector3d& body) const { return rotation * body + translation; }
};

/// Rotation that lays the facet on the substrate in the canonical heading.
Eigen::Matrix3d laid_rotation(const CreasePattern& p, const FoldState& s,
                              const Eigen::Vector3d& normal);

/// Places s on the facet with the given heading and COM position.
RestPose place_on_facet(const CreasePattern& p, const FoldState& s, const Facet& f,
                        double heading, const Eigen::Vector2d& com_xy);

/// Stable pose of s. Without a hint (or from the flat state) the facet below
/// the COM along the underside direction is taken; with a hint the contact set
/// is followed continuously and the hint's heading and COM position are kept.
RestPose find_resting_pose(const CreasePattern& p, const FoldState& s,
                           const std::optional<RestPose>& hint = std::nullopt);

struct TipEvent {
  RestPose pose;
  std::vector<int> from_ids;
  std::vector<int> to_ids;
};

/// Reports a tip when the COM leaves the support of prev's contact set for s.
std::optional<TipEvent> detect_tip_over(const CreasePattern& p, const RestPose& prev,
                                        const FoldState& s);

bool contact_change(const RestPose& prev, const RestPose& next);

/// Stability band half-width for a sheet of width b.
inline double stability_tolerance(double b) { return 1e-3 * b; }

}  // namespace crawler
