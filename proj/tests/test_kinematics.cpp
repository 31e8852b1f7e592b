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

#include <doctest.h>

#include "crawler/error.hpp"
#include "crawler/kinematics.hpp"
#include "support.hpp"

using namespace crawler;
using namespace crawler::testing;

namespace {

// Largest change of any pairwise distance between vertices of one panel.
double rigidity_error(const CreasePattern& p, const FoldState& s) {
  double worst = 0.0;
  for (const auto& panel : p.panels)
    for (std::size_t i = 0; i < panel.vertices.size(); ++i)
      for (std::size_t j = i + 1; j < panel.vertices.size(); ++j) {
        const int a = panel.vertices[i], b = panel.vertices[j];
        const double flat = (p.flat_vertices[a] - p.flat_vertices[b]).norm();
        const double folded = (s.vertices[a] - s.vertices[b]).norm();
        worst = std::max(worst, std::abs(flat - folded));
      }
  return worst;
}

}  // namespace

TEST_SUITE("kinematics") {

TEST_CASE("flat state is the identity fold") {
  const auto p = build_pattern(fixture_design("II"));
  FoldTracker tracker(p);
  const auto& s = tracker.at(180.0);
  for (double r : s.rho_deg) CHECK(r == doctest::Approx(180.0));
  CHECK(s.is_flat());
  for (int id = 0; id < kNumVertices; ++id) {
    CHECK(s.vertices[id].head<2>().isApprox(p.flat_vertices[id], 1e-12));
    CHECK(std::abs(s.vertices[id].z()) < 1e-12);
  }
  CHECK(closure_residual(p, s.rho_deg) < 1e-14);
}

TEST_CASE("closure oracle agrees with the library residual") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(120.0, 180.0);
  for (int i = 0; i < 200; ++i) {
    const auto d = random_feasible_design(rng);
    CreasePattern p;
    try {
      p = build_pattern(d);
    } catch (const DegenerateCrease&) {
      continue;
    }
    const std::array<double, 4> rho{u(rng), u(rng), u(rng), u(rng)};
    CHECK(ClosureOracle(d).residual(rho) == doctest::Approx(closure_residual(p, rho)).epsilon(1e-9));
  }
}

TEST_CASE("first-order flat branch direction is in the null space of the crease vectors") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    const auto d = random_feasible_design(rng);
    CreasePattern p;
    try {
      p = build_pattern(d);
    } catch (const DegenerateCrease&) {
      continue;
    }
    std::array<double, 4> dir;
    try {
      dir = flat_branch_direction(p);
    } catch (const NoClosure&) {
      continue;
    }
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    double norm = 0.0;
    for (int k = 0; k < 4; ++k) {
      sum += dir[k] * p.creases[k].direction;
      norm += dir[k] * dir[k];
    }
    CHECK(norm > 1e-6);
    CHECK(sum.norm() < 1e-9 * std::sqrt(norm));
  }
}

TEST_CASE("tracked fold angles close, keep panels rigid and match the oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  for (int i = 0; i < 40; ++i) {
    const auto d = random_folding_design(rng);
    const auto p = build_pattern(d);
    FoldTracker tracker(p);
    const ClosureOracle oracle(d);
    for (double beta = 177.0; beta >= 120.0; beta -= 3.0) {
      const auto& s = tracker.at(beta);
      CHECK(s.rho_deg[p.valley()] == doctest::Approx(beta));
      CHECK(closure_residual(p, s.rho_deg) < 1e-8);
      CHECK(rigidity_error(p, s) < 1e-9 * d.b);
      CHECK(s.vertices[kCentralVertex].head<2>().isApprox(p.center(), 1e-12));

      auto seed = s.rho_deg;
      for (int k = 0; k < 4; ++k)
        if (k != p.valley()) seed[k] += jitter(rng);
      const auto solved = oracle.minimise(seed);
      CHECK(oracle.residual(solved) < 1e-10);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(solved[k] - s.rho_deg[k]) < 1e-6);

      // Neighbouring panels meet at the crease's fold deviation.
      for (int k = 0; k < 4; ++k) {
        const int before = (k + 3) % 4;
        const Eigen::Vector3d n0 = s.panel_rotation[before].col(2);
        const Eigen::Vector3d n1 = s.panel_rotation[k].col(2);
        const double between = std::acos(std::clamp(n0.dot(n1), -1.0, 1.0)) / kDegToRad;
        CHECK(between == doctest::Approx(std::abs(180.0 - s.rho_deg[k])).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("tracker is path independent") {
  const auto p = build_pattern(fixture_design("III"));
  FoldTracker down(p), jump(p);
  for (double beta = 180.0; beta >= 130.0; beta -= 0.5) down.at(beta);
  const auto a = down.at(130.0).rho_deg;
  const auto b = jump.at(130.0).rho_deg;
  for (int k = 0; k < 4; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));
}

TEST_CASE("single-valley designs that cannot fold are reported") {
  auto d = fixture_design("III");
  d.valley_index = 1;
  bool failed = false;
  try {
    FoldTracker tracker(build_pattern(d));
    for (double beta = 180.0; beta >= 120.0; beta -= 0.5) tracker.at(beta);
  } catch (const NoClosure&) {
    failed = true;
  } catch (const BranchJump&) {
    failed = true;
  }
  CHECK(failed);
}

TEST_CASE("triangle intersection on constructed cases") {
  using V = Eigen::Vector3d;
  const V a0(0, 0, 0), a1(1, 0, 0), a2(0, 1, 0);
  // Pierces the first triangle.
  CHECK(triangles_intersect(a0, a1, a2, V(0.2, 0.2, -1), V(0.2, 0.2, 1), V(0.3, 0.25, 1)));
  // Parallel plane above.
  CHECK_FALSE(triangles_intersect(a0, a1, a2, V(0, 0, 1), V(1, 0, 1), V(0, 1, 1)));
  // Same plane, disjoint.
  CHECK_FALSE(triangles_intersect(a0, a1, a2, V(2, 2, 0), V(3, 2, 0), V(2, 3, 0)));
  // Crosses the plane outside the triangle.
  CHECK_FALSE(triangles_intersect(a0, a1, a2, V(2, 2, -1), V(2, 2, 1), V(2.1, 2.2, 1)));
  // Order of arguments does not matter.
  CHECK(triangles_intersect(V(0.2, 0.2, -1), V(0.2, 0.2, 1), V(0.3, 0.25, 1), a0, a1, a2));
}

TEST_CASE("fixtures fold without self intersection over the canonical range") {
  for (const std::string name : {"I", "II", "III", "V", "VI", "VII"}) {
    CAPTURE(name);
    const auto p = build_pattern(fixture_design(name));
    FoldTracker tracker(p);
    for (double beta = 180.0; beta >= 120.0; beta -= 5.0)
      CHECK_FALSE(detect_self_intersection(p, tracker.at(beta)));
  }
}

}  // TEST_SUITE
