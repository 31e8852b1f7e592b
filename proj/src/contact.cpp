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

#include "crawler/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "crawler/error.hpp"

namespace crawler {

namespace {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

// Rotation taking unit n onto -z by the shortest arc.
Mat3 align_to_down(const Vec3& n) {
  const Vec3 down = -Vec3::UnitZ();
  const double c = n.dot(down);
  if (c > 1.0 - 1e-15) return Mat3::Identity();
  if (c < -1.0 + 1e-15) return Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  return Eigen::Quaterniond::FromTwoVectors(n, down).toRotationMatrix();
}

Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Andrew's monotone chain over indices into pts; counterclockwise, no
// collinear points.
std::vector<int> convex_hull_2d(const std::vector<Vec2>& pts) {
  std::vector<int> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
  });
  if (idx.size() < 3) return idx;
  std::vector<int> hull(2 * idx.size());
  std::size_t k = 0;
  for (int i : idx) {
    while (k >= 2 && cross2(pts[hull[k - 1]] - pts[hull[k - 2]], pts[i] - pts[hull[k - 2]]) <= 0.0)
      --k;
    hull[k++] = i;
  }
  for (std::size_t t = idx.size() - 1, lower = k + 1; t-- > 0;) {
    const int i = idx[t];
    while (k >= lower && cross2(pts[hull[k - 1]] - pts[hull[k - 2]], pts[i] - pts[hull[k - 2]]) <= 0.0)
      --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

// Signed distance of q to each polygon edge (positive inside); returns the
// minimum and the edge index attaining it.
std::pair<double, int> polygon_margin(const std::vector<Vec2>& poly, const Vec2& q) {
  double best = std::numeric_limits<double>::infinity();
  int edge = -1;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    const double d = cross2(b - a, q - a) / len;
    if (d < best) {
      best = d;
      edge = static_cast<int>(i);
    }
  }
  return {best, edge};
}

// Rotation of the body that best matches its vertices to the flat pattern;
// comparing normals in this frame does not depend on which panel is fixed.
Mat3 canonical_rotation(const CreasePattern& p, const FoldState& s) {
  Eigen::Matrix<double, 3, kNumVertices> src, dst;
  for (int i = 0; i < kNumVertices; ++i) {
    src.col(i) = s.vertices[i];
    dst.col(i) = Vec3(p.flat_vertices[i].x(), p.flat_vertices[i].y(), 0.0);
  }
  const Eigen::Matrix4d t = Eigen::umeyama(src, dst, false);
  return t.topLeftCorner<3, 3>();
}

const Facet* neighbor_across(const std::vector<Facet>& facets, const Facet& cur, int a, int b) {
  const Facet* best = nullptr;
  double best_dot = -2.0;
  for (const auto& f : facets) {
    if (f.ids == cur.ids) continue;
    const bool has_a = std::binary_search(f.ids.begin(), f.ids.end(), a);
    const bool has_b = std::binary_search(f.ids.begin(), f.ids.end(), b);
    if (!has_a || !has_b) continue;
    const double d = f.normal.dot(cur.normal);
    if (d > best_dot) {
      best_dot = d;
      best = &f;
    }
  }
  return best;
}

struct Resolved {
  const Facet* facet;
  bool tipped;
};

// Tips over the worst support edge until the COM projection is inside. In the
// band [0, tol] the pose only moves when the neighbour is strictly better,
// which keeps it from rocking between two nearly balanced facets.
Resolved resolve_stability(const std::vector<Facet>& facets, const Facet* start, double tol) {
  const Facet* cur = start;
  bool tipped = false;
  std::set<std::vector<int>> visited;
  while (true) {
    if (!cur->admissible) throw NoStablePose("sheet would rest on its upper side");
    visited.insert(cur->ids);
    if (cur->margin > tol) break;
    const auto& poly = cur->polygon;
    const int a = poly[cur->worst_edge];
    const int b = poly[(cur->worst_edge + 1) % poly.size()];
    const Facet* next = neighbor_across(facets, *cur, a, b);
    if (cur->margin >= 0.0) {
      if (next && next->admissible && next->margin > cur->margin && !visited.count(next->ids)) {
        cur = next;
        tipped = true;
        continue;
      }
      break;
    }
    if (!next || visited.count(next->ids))
      throw NoStablePose("no stable facet reachable by tipping");
    cur = next;
    tipped = true;
  }
  return {cur, tipped};
}

// Facet holding the COM whose normal is closest to the underside direction.
const Facet* most_downward_facet(const std::vector<Facet>& facets, const Vec3& down) {
  const Facet* best = nullptr;
  for (const auto& f : facets)
    if (f.admissible && f.margin > 0.0 && (!best || f.normal.dot(down) > best->normal.dot(down)))
      best = &f;
  return best;
}

const Facet* facet_below_com(const std::vector<Facet>& facets, const FoldState& s,
                             const Vec3& down) {
  const Facet* best = nullptr;
  double best_t = std::numeric_limits<double>::infinity();
  for (const auto& f : facets) {
    const double nd = f.normal.dot(down);
    if (nd <= 0.0) continue;
    const double t = (f.offset - f.normal.dot(s.com)) / nd;
    if (t >= 0.0 && t < best_t) {
      best_t = t;
      best = &f;
    }
  }
  if (!best) throw NoStablePose("no hull facet below the center of mass");
  return best;
}

bool contains(const std::vector<int>& sorted, int id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

int shared_count(const std::vector<int>& a, const std::vector<int>& b) {
  int n = 0;
  for (int id : a)
    if (contains(b, id)) ++n;
  return n;
}

}  // namespace

std::vector<Facet> hull_facets(const CreasePattern& p, const FoldState& s, double tol) {
  const Vec3 down = underside_direction(s, p);
  std::vector<Facet> out;
  std::set<std::vector<int>> seen;
  const auto& v = s.vertices;
  for (int i = 0; i < kNumVertices; ++i) {
    for (int j = i + 1; j < kNumVertices; ++j) {
      for (int k = j + 1; k < kNumVertices; ++k) {
        Vec3 n = (v[j] - v[i]).cross(v[k] - v[i]);
        const double len = n.norm();
        if (len < 1e-9) continue;
        n /= len;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int q = 0; q < kNumVertices; ++q) {
          const double d = n.dot(v[q] - v[i]);
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
        if (hi > tol) {
          if (lo < -tol) continue;
          n = -n;  // the body lies on the positive side; flip to point outward
        } else if (lo >= -tol && n.dot(down) < 0.0) {
          n = -n;  // planar sheet: both sides support it, keep the underside
        }
        Facet f;
        f.normal = n;
        f.offset = n.dot(v[i]);
        for (int q = 0; q < kNumVertices; ++q)
          if (std::abs(n.dot(v[q]) - f.offset) <= tol) f.ids.push_back(q);
        if (!seen.insert(f.ids).second) continue;

        const Mat3 a = align_to_down(n);
        std::vector<Vec2> pts;
        for (int id : f.ids) pts.push_back((a * v[id]).head<2>());
        const auto hull = convex_hull_2d(pts);
        std::vector<Vec2> poly;
        for (int h : hull) {
          f.polygon.push_back(f.ids[h]);
          poly.push_back(pts[h]);
        }
        const auto [m, e] = polygon_margin(poly, (a * s.com).head<2>());
        f.margin = m;
        f.worst_edge = e;
        f.admissible = n.dot(down) > 0.0;
        out.push_back(std::move(f));
      }
    }
  }
  return out;
}

Vec3 underside_direction(const FoldState& s, const CreasePattern& p) {
  Vec3 up = Vec3::Zero();
  for (int k = 0; k < kNumCreases; ++k)
    up += p.panels[k].area * (s.panel_rotation[k] * Vec3::UnitZ());
  return -up.normalized();
}

std::vector<int> RestPose::contact_ids() const {
  std::vector<int> ids;
  for (const auto& c : contacts) ids.push_back(c.vertex_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Mat3 laid_rotation(const CreasePattern& p, const FoldState& s, const Vec3& normal) {
  const Mat3 a = align_to_down(normal);
  Eigen::Matrix<double, 2, kNumVertices> x, y;
  for (int i = 0; i < kNumVertices; ++i) {
    x.col(i) = (a * s.vertices[i]).head<2>();
    y.col(i) = p.flat_vertices[i];
  }
  x.colwise() -= x.rowwise().mean();
  y.colwise() -= y.rowwise().mean();
  const Eigen::Matrix2d h = x * y.transpose();
  const double turn = std::atan2(h(0, 1) - h(1, 0), h(0, 0) + h(1, 1));
  return rot_z(turn) * a;
}

RestPose place_on_facet(const CreasePattern& p, const FoldState& s, const Facet& f,
                        double heading, const Vec2& com_xy) {
  RestPose pose;
  pose.rotation = rot_z(heading) * laid_rotation(p, s, f.normal);
  pose.heading = heading;
  const Vec3 com = pose.rotation * s.com;
  const double lift = -(pose.rotation * s.vertices[f.ids.front()]).z();
  pose.translation = Vec3(com_xy.x() - com.x(), com_xy.y() - com.y(), lift);
  pose.com_proj = com_xy;
  pose.facet_normal = f.normal;
  pose.canonical_normal = canonical_rotation(p, s) * f.normal;
  pose.margin = f.margin;

  std::vector<Vec3> panel_normal(kNumCreases);
  for (int k = 0; k < kNumCreases; ++k) panel_normal[k] = s.panel_rotation[k] * Vec3::UnitZ();
  auto tilt_deg = [&](int panel) {
    return std::acos(std::min(1.0, std::abs(panel_normal[panel].dot(f.normal)))) * kRadToDeg;
  };

  for (int id : f.ids) {
    ContactPoint c;
    c.vertex_id = id;
    c.world_xy = pose.to_world(s.vertices[id]).head<2>();
    c.adjacent_panels = p.panels_of_vertex(id);
    // A panel shared with another contact carries a contacting edge.
    std::vector<int> edge_panels;
    for (int panel : c.adjacent_panels) {
      const auto& pv = p.panels[panel].vertices;
      for (int other : f.ids)
        if (other != id && std::find(pv.begin(), pv.end(), other) != pv.end()) {
          edge_panels.push_back(panel);
          break;
        }
    }
    const auto& candidates = edge_panels.empty() ? c.adjacent_panels : edge_panels;
    c.psi_deg = 90.0;
    for (int panel : candidates) c.psi_deg = std::min(c.psi_deg, tilt_deg(panel));
    pose.contacts.push_back(std::move(c));
  }
  for (int id : f.polygon) pose.support_polygon.push_back(pose.to_world(s.vertices[id]).head<2>());
  return pose;
}

RestPose find_resting_pose(const CreasePattern& p, const FoldState& s,
                           const std::optional<RestPose>& hint) {
  const auto facets = hull_facets(p, s);
  const double tol = stability_tolerance(p.design.b);
  const bool from_flat =
      !hint || static_cast<int>(hint->contacts.size()) == kNumVertices;

  const Facet* start = nullptr;
  if (!from_flat) {
    const auto prev = hint->contact_ids();
    for (const auto& f : facets)
      if (f.ids == prev) start = &f;
    if (!start) {
      const Mat3 canon = canonical_rotation(p, s);
      double best = -2.0;
      for (const auto& f : facets) {
        if (!f.admissible || shared_count(f.ids, prev) < 2) continue;
        const double d = (canon * f.normal).dot(hint->canonical_normal);
        if (d > best) {
          best = d;
          start = &f;
        }
      }
    }
  }
  if (!start) start = most_downward_facet(facets, underside_direction(s, p));
  if (!start) start = facet_below_com(facets, s, underside_direction(s, p));

  const auto [facet, tipped] = resolve_stability(facets, start, tol);
  const double heading = hint ? hint->heading : 0.0;
  Vec2 com_xy;
  if (hint) {
    com_xy = hint->com_proj;
  } else {
    com_xy = (laid_rotation(p, s, facet->normal) * s.com).head<2>();
  }
  RestPose pose = place_on_facet(p, s, *facet, heading, com_xy);
  pose.tipped = tipped;
  return pose;
}

std::optional<TipEvent> detect_tip_over(const CreasePattern& p, const RestPose& prev,
                                        const FoldState& s) {
  const auto facets = hull_facets(p, s);
  const auto ids = prev.contact_ids();
  const Facet* cur = nullptr;
  for (const auto& f : facets)
    if (f.ids == ids) cur = &f;
  const double tol = stability_tolerance(p.design.b);
  if (!cur || cur->margin > tol) return std::nullopt;
  const auto [facet, tipped] = resolve_stability(facets, cur, tol);
  if (!tipped) return std::nullopt;
  TipEvent ev;
  ev.pose = place_on_facet(p, s, *facet, prev.heading, prev.com_proj);
  ev.pose.tipped = true;
  ev.from_ids = ids;
  ev.to_ids = facet->ids;
  return ev;
}

bool contact_change(const RestPose& prev, const RestPose& next) {
  return prev.contact_ids() != next.contact_ids();
}

}  // namespace crawler
