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

#include "crawler/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "crawler/error.hpp"

namespace crawler {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Perimeter coordinate, counterclockwise from (0,0): bottom, right, top, left.
double perimeter_param(const Eigen::Vector2d& p, int side, double b, double h) {
  switch (side) {
    case 0: return p.x();
    case 1: return b + p.y();
    case 2: return b + h + (b - p.x());
    default: return 2.0 * b + h + (h - p.y());
  }
}

struct RayHit {
  Eigen::Vector2d point;
  int side;
};

RayHit cast_to_boundary(const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                        double b, double h) {
  double best = std::numeric_limits<double>::infinity();
  int side = -1;
  auto consider = [&](double t, int s) {
    if (t > 0.0 && t < best) {
      best = t;
      side = s;
    }
  };
  if (dir.y() < 0.0) consider(-origin.y() / dir.y(), 0);
  if (dir.x() > 0.0) consider((b - origin.x()) / dir.x(), 1);
  if (dir.y() > 0.0) consider((h - origin.y()) / dir.y(), 2);
  if (dir.x() < 0.0) consider(-origin.x() / dir.x(), 3);
  Eigen::Vector2d p = origin + best * dir;
  // Snap to the boundary line so endpoints lie on the rectangle exactly.
  switch (side) {
    case 0: p.y() = 0.0; break;
    case 1: p.x() = b; break;
    case 2: p.y() = h; break;
    default: p.x() = 0.0; break;
  }
  p.x() = std::clamp(p.x(), 0.0, b);
  p.y() = std::clamp(p.y(), 0.0, h);
  return {p, side};
}

double polygon_area(const std::vector<Eigen::Vector2d>& pts, Eigen::Vector2d* centroid) {
  double a2 = 0.0;
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % n];
    const double cr = p.x() * q.y() - q.x() * p.y();
    a2 += cr;
    c += (p + q) * cr;
  }
  if (centroid) *centroid = c / (3.0 * a2);
  return 0.5 * a2;
}

}  // namespace

std::string vertex_label(int id) { return "v" + std::to_string(id + 1); }

FeasibilityFlags validate_design(const VertexDesign& d) {
  FeasibilityFlags f;
  const auto s = d.sectors();
  f.theta4 = s[3];
  f.developable = std::all_of(s.begin(), s.end(), [](double t) { return t > 0.0; });
  f.rigidly_foldable = f.developable;
  for (int j = 0; j < 4 && f.rigidly_foldable; ++j) {
    double others = 0.0;
    for (int i = 0; i < 4; ++i)
      if (i != j) others += s[i];
    f.rigidly_foldable = s[j] < others;
  }
  f.vertex_interior = d.b > 0.0 && d.h > 0.0 && d.xv > 0.0 && d.xv < d.b && d.yv > 0.0 &&
                      d.yv < d.h;
  return f;
}

std::vector<int> CreasePattern::panels_of_vertex(int id) const {
  std::vector<int> out;
  for (int k = 0; k < kNumCreases; ++k) {
    const auto& v = panels[k].vertices;
    if (std::find(v.begin(), v.end(), id) != v.end()) out.push_back(k);
  }
  return out;
}

int CreasePattern::owner_panel(int id) const {
  if (id < kNumCreases) return id;
  if (id == kCentralVertex) return 0;
  return panels_of_vertex(id).front();
}

CreasePattern build_pattern(const VertexDesign& d) {
  const FeasibilityFlags flags = validate_design(d);
  if (!flags.all())
    throw InvalidDesign("design is not developable, rigidly foldable and interior");
  if (d.valley_index < 1 || d.valley_index > 4)
    throw InvalidDesign("valley_index must lie in 1..4");

  CreasePattern p;
  p.design = d;
  p.sector_deg = d.sectors();
  const double b = d.b;
  const double h = d.h;
  const Eigen::Vector2d center(d.xv, d.yv);

  const std::array<Eigen::Vector2d, 4> corners{
      Eigen::Vector2d(b, 0.0), Eigen::Vector2d(b, h), Eigen::Vector2d(0.0, h),
      Eigen::Vector2d(0.0, 0.0)};
  for (int c = 0; c < 4; ++c) p.flat_vertices[kFirstCorner + c] = corners[c];
  p.flat_vertices[kCentralVertex] = center;
  // Perimeter coordinates of the corners (b,0), (b,h), (0,h), (0,0).
  const std::array<double, 4> corner_param{b, b + h, 2.0 * b + h, 0.0};
  const double perimeter = 2.0 * (b + h);

  std::array<double, 4> end_param{};
  double cumulative = d.theta_v;
  for (int k = 0; k < kNumCreases; ++k) {
    Crease& c = p.creases[k];
    c.angle = cumulative * kDeg;
    c.direction = Eigen::Vector2d(std::cos(c.angle), std::sin(c.angle));
    c.end_vertex = k;
    c.fold = (k == d.valley_index - 1) ? Fold::Valley : Fold::Mountain;
    const RayHit hit = cast_to_boundary(center, c.direction, b, h);
    for (const auto& corner : corners) {
      // Distance from the corner to the crease ray.
      const Eigen::Vector2d rel = corner - center;
      const double along = rel.dot(c.direction);
      const double off = std::abs(rel.x() * c.direction.y() - rel.y() * c.direction.x());
      if (along > 0.0 && off < 1e-6 * b)
        throw DegenerateCrease("crease " + std::to_string(k + 1) + " runs through a corner");
    }
    p.flat_vertices[k] = hit.point;
    end_param[k] = perimeter_param(hit.point, hit.side, b, h);
    if (k < 3) cumulative += d.theta[k];
  }

  for (int k = 0; k < kNumCreases; ++k) {
    const int next = (k + 1) % kNumCreases;
    const double t0 = end_param[k];
    double t1 = end_param[next];
    if (t1 <= t0) t1 += perimeter;
    std::vector<std::pair<double, int>> between;
    for (int c = 0; c < 4; ++c) {
      for (double wrap : {0.0, perimeter}) {
        const double t = corner_param[c] + wrap;
        if (t > t0 && t < t1) between.emplace_back(t, kFirstCorner + c);
      }
    }
    std::sort(between.begin(), between.end());
    Panel& panel = p.panels[k];
    panel.vertices = {kCentralVertex, k};
    for (const auto& [t, id] : between) panel.vertices.push_back(id);
    panel.vertices.push_back(next);

    std::vector<Eigen::Vector2d> pts;
    for (int id : panel.vertices) pts.push_back(p.flat_vertices[id]);
    panel.area = polygon_area(pts, &panel.centroid);
  }
  return p;
}

VertexDesign mirror_design(const VertexDesign& d) {
  VertexDesign m = d;
  m.theta = {d.theta[2], d.theta[1], d.theta[0]};
  double tv = 180.0 - (d.theta_v + d.theta[0] + d.theta[1] + d.theta[2]);
  tv = std::fmod(tv, 360.0);
  if (tv < 0.0) tv += 360.0;
  m.theta_v = tv;
  m.xv = d.b - d.xv;
  m.valley_index = 5 - d.valley_index;
  return m;
}

void to_json(nlohmann::json& j, const VertexDesign& d) {
  j = nlohmann::json{{"b_mm", d.b},
                     {"h_mm", d.h},
                     {"theta_deg", {d.theta[0], d.theta[1], d.theta[2]}},
                     {"theta_v_deg", d.theta_v},
                     {"xv_mm", d.xv},
                     {"yv_mm", d.yv},
                     {"valley_index", d.valley_index},
                     {"weight", d.weight}};
}

void from_json(const nlohmann::json& j, VertexDesign& d) {
  d.b = j.at("b_mm").get<double>();
  d.h = j.at("h_mm").get<double>();
  const auto& t = j.at("theta_deg");
  if (!t.is_array() || t.size() != 3) throw FormatError("theta_deg must hold three angles");
  d.theta = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
  d.theta_v = j.at("theta_v_deg").get<double>();
  d.xv = j.at("xv_mm").get<double>();
  d.yv = j.at("yv_mm").get<double>();
  d.valley_index = j.value("valley_index", 3);
  d.weight = j.value("weight", 1.0);
}

VertexDesign load_design(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open design file " + path.string());
  try {
    return nlohmann::json::parse(in).get<VertexDesign>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed design file " + path.string() + ": " + e.what());
  }
}

void save_design(const VertexDesign& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << nlohmann::json(d).dump(2) << '\n';
}

}  // namespace crawler
