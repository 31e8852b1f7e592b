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

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Geometry>

#include "crawler/kinematics.hpp"

namespace crawler {

namespace {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

struct Triangle {
  Vec3 a, b, c;
};

double cross2(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

bool point_in_triangle_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c,
                          double eps) {
  const double d1 = cross2(b - a, p - a);
  const double d2 = cross2(c - b, p - b);
  const double d3 = cross2(a - c, p - c);
  const bool has_neg = d1 < -eps || d2 < -eps || d3 < -eps;
  const bool has_pos = d1 > eps || d2 > eps || d3 > eps;
  return !(has_neg && has_pos);
}

bool segments_intersect_2d(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1,
                           double eps) {
  const double d1 = cross2(q1 - q0, p0 - q0);
  const double d2 = cross2(q1 - q0, p1 - q0);
  const double d3 = cross2(p1 - p0, q0 - p0);
  const double d4 = cross2(p1 - p0, q1 - p0);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  auto on_segment = [eps](const Vec2& a, const Vec2& b, const Vec2& p, double d) {
    if (std::abs(d) > eps) return false;
    return p.x() >= std::min(a.x(), b.x()) - eps && p.x() <= std::max(a.x(), b.x()) + eps &&
           p.y() >= std::min(a.y(), b.y()) - eps && p.y() <= std::max(a.y(), b.y()) + eps;
  };
  return on_segment(q0, q1, p0, d1) || on_segment(q0, q1, p1, d2) ||
         on_segment(p0, p1, q0, d3) || on_segment(p0, p1, q1, d4);
}

bool coplanar_overlap(const Triangle& s, const Triangle& t, const Vec3& normal, double eps) {
  // Drop the dominant normal axis and test in 2D.
  int drop = 0;
  normal.cwiseAbs().maxCoeff(&drop);
  auto proj = [drop](const Vec3& v) {
    switch (drop) {
      case 0: return Vec2(v.y(), v.z());
      case 1: return Vec2(v.z(), v.x());
      default: return Vec2(v.x(), v.y());
    }
  };
  const std::array<Vec2, 3> a{proj(s.a), proj(s.b), proj(s.c)};
  const std::array<Vec2, 3> b{proj(t.a), proj(t.b), proj(t.c)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (segments_intersect_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3], eps)) return true;
  return point_in_triangle_2d(a[0], b[0], b[1], b[2], eps) ||
         point_in_triangle_2d(b[0], a[0], a[1], a[2], eps);
}

// Does segment p0-p1 meet triangle t (not coplanar with it)?
bool segment_hits_triangle(const Vec3& p0, const Vec3& p1, const Triangle& t, double eps) {
  const Vec3 n = (t.b - t.a).cross(t.c - t.a);
  const double nn = n.norm();
  if (nn == 0.0) return false;
  const Vec3 u = n / nn;
  const double d0 = u.dot(p0 - t.a);
  const double d1 = u.dot(p1 - t.a);
  if ((d0 > eps && d1 > eps) || (d0 < -eps && d1 < -eps)) return false;
  if (std::abs(d0 - d1) <= eps) return false;  // parallel; handled by the coplanar test
  const double s = d0 / (d0 - d1);
  const Vec3 x = p0 + s * (p1 - p0);
  const Vec3 c0 = (t.b - t.a).cross(x - t.a);
  const Vec3 c1 = (t.c - t.b).cross(x - t.b);
  const Vec3 c2 = (t.a - t.c).cross(x - t.c);
  const double tol = -eps * std::sqrt(nn);
  return c0.dot(u) >= tol && c1.dot(u) >= tol && c2.dot(u) >= tol;
}

std::vector<Triangle> trimmed_fan(const CreasePattern& p, const FoldState& s, int panel,
                                  double trim) {
  const auto& ids = p.panels[panel].vertices;
  const Vec3& c = s.vertices[ids[0]];
  std::vector<Triangle> tris;
  for (std::size_t i = 1; i + 1 < ids.size(); ++i) {
    const Vec3& x = s.vertices[ids[i]];
    const Vec3& y = s.vertices[ids[i + 1]];
    const Vec3 cx = c + trim * (x - c).normalized();
    const Vec3 cy = c + trim * (y - c).normalized();
    tris.push_back({cx, x, y});
    tris.push_back({cx, y, cy});
  }
  return tris;
}

}  // namespace

bool triangles_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                         const Vec3& b1, const Vec3& b2) {
  const Triangle s{a0, a1, a2};
  const Triangle t{b0, b1, b2};
  double scale = 0.0;
  for (const Vec3* v : {&a0, &a1, &a2, &b0, &b1, &b2}) scale = std::max(scale, v->cwiseAbs().maxCoeff());
  const double eps = 1e-12 * std::max(scale, 1.0);

  const Vec3 ns = (a1 - a0).cross(a2 - a0);
  const Vec3 nt = (b1 - b0).cross(b2 - b0);
  if (ns.norm() == 0.0 || nt.norm() == 0.0) return false;
  const Vec3 us = ns.normalized();
  const double dt0 = us.dot(b0 - a0), dt1 = us.dot(b1 - a0), dt2 = us.dot(b2 - a0);
  if ((dt0 > eps && dt1 > eps && dt2 > eps) || (dt0 < -eps && dt1 < -eps && dt2 < -eps))
    return false;
  if (std::abs(dt0) <= eps && std::abs(dt1) <= eps && std::abs(dt2) <= eps)
    return coplanar_overlap(s, t, us, eps * scale);

  const std::array<std::pair<const Vec3*, const Vec3*>, 3> es{
      {{&a0, &a1}, {&a1, &a2}, {&a2, &a0}}};
  const std::array<std::pair<const Vec3*, const Vec3*>, 3> et{
      {{&b0, &b1}, {&b1, &b2}, {&b2, &b0}}};
  for (const auto& [p, q] : es)
    if (segment_hits_triangle(*p, *q, t, eps)) return true;
  for (const auto& [p, q] : et)
    if (segment_hits_triangle(*p, *q, s, eps)) return true;
  return false;
}

bool detect_self_intersection(const CreasePattern& p, const FoldState& s) {
  for (double rho : s.rho_deg)
    if (rho <= 1e-9) return true;
  // Fan triangles lose a small cap around the shared central vertex so that
  // touching there is not reported.
  const double trim = 1e-3 * p.design.b;
  for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 3}}) {
    const auto ti = trimmed_fan(p, s, i, trim);
    const auto tj = trimmed_fan(p, s, j, trim);
    for (const auto& x : ti)
      for (const auto& y : tj)
        if (triangles_intersect(x.a, x.b, x.c, y.a, y.b, y.c)) return true;
  }
  return false;
}

}  // namespace crawler
