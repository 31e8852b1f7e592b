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

#include <algorithm>
#include <set>

#include "crawler/contact.hpp"
#include "crawler/error.hpp"
#include "crawler/gait.hpp"
#include "support.hpp"

using namespace crawler;
using namespace crawler::testing;

namespace {

// Vertex sets of all supporting planes, found by trying every triple.
std::set<std::vector<int>> brute_force_facets(const FoldState& s, double tol) {
  std::set<std::vector<int>> out;
  const auto& v = s.vertices;
  for (int i = 0; i < kNumVertices; ++i)
    for (int j = i + 1; j < kNumVertices; ++j)
      for (int k = j + 1; k < kNumVertices; ++k) {
        Eigen::Vector3d n = (v[j] - v[i]).cross(v[k] - v[i]);
        if (n.norm() < 1e-9) continue;
        n.normalize();
        int above = 0, below = 0;
        std::vector<int> on;
        for (int m = 0; m < kNumVertices; ++m) {
          const double dist = n.dot(v[m] - v[i]);
          if (dist > tol) ++above;
          else if (dist < -tol) ++below;
          else on.push_back(m);
        }
        if (above == 0 || below == 0) out.insert(on);
      }
  return out;
}

}  // namespace

TEST_SUITE("contact") {

TEST_CASE("hull facets match the brute-force supporting planes") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> beta(121.0, 178.0);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_folding_design(rng);
    const auto p = build_pattern(d);
    FoldTracker tracker(p);
    const auto& s = tracker.at(std::round(beta(rng) * 2.0) / 2.0);
    const double tol = 1e-6 * d.b;
    const auto facets = hull_facets(p, s, tol);
    std::set<std::vector<int>> found;
    for (const auto& f : facets) {
      found.insert(f.ids);
      CHECK(std::is_sorted(f.ids.begin(), f.ids.end()));
      CHECK(f.normal.norm() == doctest::Approx(1.0));
      for (int m = 0; m < kNumVertices; ++m) CHECK(f.normal.dot(s.vertices[m]) <= f.offset + tol);
    }
    CHECK(found == brute_force_facets(s, tol));
  }
}

TEST_CASE("flat sheet rests on all nine vertices") {
  Gait gait(fixture_design("II"));
  const RestPose pose = gait.initial_pose(180.0);
  CHECK(pose.contacts.size() == 9u);
  CHECK(pose.support_polygon.size() == 4u);
}

TEST_CASE("resting poses touch the ground on the contacts and nowhere below") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_folding_design(rng);
    Gait gait(d);
    for (double beta : {170.0, 150.0, 130.0}) {
      RestPose pose;
      try {
        pose = gait.initial_pose(beta);
      } catch (const NoStablePose&) {
        continue;
      }
      const auto& s = gait.shape(beta);
      const auto ids = pose.contact_ids();
      for (int m = 0; m < kNumVertices; ++m) {
        const double z = pose.to_world(s.vertices[m]).z();
        CHECK(z >= -1e-9 * d.b);
        if (std::find(ids.begin(), ids.end(), m) != ids.end()) CHECK(std::abs(z) < 1e-9 * d.b);
      }
      for (const auto& c : pose.contacts)
        CHECK((pose.to_world(s.vertices[c.vertex_id]).head<2>() - c.world_xy).norm() < 1e-9 * d.b);
      CHECK((pose.to_world(s.com).head<2>() - pose.com_proj).norm() < 1e-9 * d.b);
      // The rotation is proper.
      CHECK(pose.rotation.determinant() == doctest::Approx(1.0));
      CHECK((pose.rotation * pose.rotation.transpose()).isIdentity(1e-12));
      CHECK(pose.margin >= -stability_tolerance(d.b));
    }
  }
}

TEST_CASE("design III switches support near 155 degrees") {
  Gait gait(fixture_design("III"));
  Trajectory t;
  RestPose pose = gait.initial_pose(180.0);
  pose = gait.run_inflation(pose, 180.0, 160.0, 0.5, t);
  CHECK(pose.contact_ids() == std::vector<int>{2, 5, 7});  // edge v3-v6 and v8
  pose = gait.run_inflation(pose, 160.0, 150.0, 0.5, t);
  CHECK(pose.contact_ids() == std::vector<int>{5, 7, 8});  // v6 v8 v9
}

TEST_CASE("contact_change compares contact sets") {
  RestPose a, b;
  a.contacts.resize(3);
  b.contacts.resize(3);
  for (int i = 0; i < 3; ++i) a.contacts[i].vertex_id = b.contacts[i].vertex_id = i + 5;
  CHECK_FALSE(contact_change(a, b));
  b.contacts[2].vertex_id = 1;
  CHECK(contact_change(a, b));
}

TEST_CASE("stability band scales with the sheet") {
  CHECK(stability_tolerance(90.0) == doctest::Approx(0.09));
}

}  // TEST_SUITE
