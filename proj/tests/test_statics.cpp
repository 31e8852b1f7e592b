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

#include <fstream>

#include "crawler/error.hpp"
#include "crawler/statics.hpp"
#include "support.hpp"

using namespace crawler;
using namespace crawler::testing;
using Vec2 = Eigen::Vector2d;

namespace {

SlipContact contact(int id, Vec2 prev, Vec2 next, double normal, double mu, int panel) {
  SlipContact c;
  c.vertex_id = id;
  c.prev_world = prev;
  c.next_laid = next;
  c.normal = normal;
  c.mu = mu;
  c.panels = {panel};
  return c;
}

}  // namespace

TEST_SUITE("statics") {

TEST_CASE("friction models") {
  CHECK(static_friction(0.0, 30.0, FrictionModel::constant(0.4)) == 0.0);
  CHECK(static_friction(1.0, 30.0, FrictionModel::constant(0.4)) == doctest::Approx(0.4));
  const auto table = FrictionModel::table({{0.0, 0.3}, {90.0, 0.5}});
  CHECK(static_friction(2.0, 45.0, table) == doctest::Approx(0.8));
  CHECK(table.mu(-10.0) == doctest::Approx(0.3));
  CHECK(table.mu(120.0) == doctest::Approx(0.5));

  const auto dir = scratch_dir("friction");
  std::ofstream(dir / "mu.csv") << "psi_deg,mu_s\n0,0.2\n60,0.8\n";
  CHECK(FrictionModel::load_csv(dir / "mu.csv").mu(30.0) == doctest::Approx(0.5));
  std::ofstream(dir / "bad.csv") << "psi_deg,mu_s\n0,abc\n";
  CHECK_THROWS_AS(FrictionModel::load_csv(dir / "bad.csv"), FormatError);
}

TEST_CASE("normal forces at the centroid and at a vertex") {
  const std::array<Vec2, 3> tri{Vec2(0, 0), Vec2(3, 0), Vec2(0, 3)};
  const auto centre = normal_forces(tri, Vec2(1, 1), 1.0, 3.0);
  for (double n : centre) CHECK(n == doctest::Approx(1.0 / 3.0));
  const auto corner = normal_forces(tri, Vec2(0, 0), 2.0, 3.0);
  CHECK(corner[0] == doctest::Approx(2.0));
  CHECK(corner[1] == doctest::Approx(0.0));
  CHECK(corner[2] == doctest::Approx(0.0));
}

TEST_CASE("normal forces match barycentric weights and balance moments") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-50.0, 50.0), w(0.1, 10.0), l(0.01, 1.0);
  int checked = 0;
  while (checked < 500) {
    const std::array<Vec2, 3> tri{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    if (std::abs(cross2(tri[1] - tri[0], tri[2] - tri[0])) < 100.0) continue;
    Eigen::Vector3d lam(l(rng), l(rng), l(rng));
    lam /= lam.sum();
    const Vec2 com = lam[0] * tri[0] + lam[1] * tri[1] + lam[2] * tri[2];
    const double weight = w(rng);
    const auto n = normal_forces(tri, com, weight, 90.0);
    const Eigen::Vector3d oracle = barycentric(tri[0], tri[1], tri[2], com) * weight;
    Vec2 moment = Vec2::Zero();
    for (int i = 0; i < 3; ++i) {
      CHECK(n[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
      moment += n[i] * (tri[i] - com);
    }
    CHECK(n[0] + n[1] + n[2] == doctest::Approx(weight).epsilon(1e-12));
    CHECK(moment.norm() < 1e-9 * weight * 90.0);
    ++checked;
  }
}

TEST_CASE("normal force errors") {
  const std::array<Vec2, 3> tri{Vec2(0, 0), Vec2(3, 0), Vec2(0, 3)};
  CHECK_THROWS_AS(normal_forces(tri, Vec2(5, 5), 1.0, 3.0), Unstable);
  const std::array<Vec2, 3> line{Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)};
  CHECK_THROWS_AS(normal_forces(line, Vec2(1, 0), 1.0, 3.0), Degenerate);
}

TEST_CASE("distributed normal forces on four or more contacts") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const std::vector<Vec2> square{Vec2(0, 0), Vec2(90, 0), Vec2(90, 90), Vec2(0, 90)};
  for (int i = 0; i < 200; ++i) {
    const Vec2 com(90.0 * u(rng), 90.0 * u(rng));
    const auto n = distribute_normal_forces(square, com, 1.0, 90.0);
    double sum = 0.0;
    Vec2 moment = Vec2::Zero();
    for (std::size_t k = 0; k < n.size(); ++k) {
      CHECK(n[k] >= -1e-12);
      sum += n[k];
      moment += n[k] * (square[k] - com);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moment.norm() < 1e-9 * 90.0);
  }
}

TEST_CASE("two slipping contacts shifted together leave an in-line anchor unrotated") {
  // Slipping contacts at (+-1, 0) both move +x by delta; the anchor at the
  // origin lies on their line of action, so zero rotation balances moments
  // and the anchor carries both slip forces reversed.
  const double delta = 0.01, mu = 0.4;
  SlipProblem pb;
  pb.contacts = {contact(0, Vec2(0, 0), Vec2(0, 0), 0.6, mu, 0),
                 contact(1, Vec2(-1, 0), Vec2(-1 + delta, 0), 0.2, mu, 1),
                 contact(2, Vec2(1, 0), Vec2(1 + delta, 0), 0.2, mu, 2)};
  pb.weight = 1.0;
  pb.length_scale = 1.0;
  StepOptions forced;
  forced.forced_anchor = 0;
  const auto sol = solve_stick_slip(pb, forced);
  CHECK(sol.anchor_id == 0);
  CHECK(std::abs(sol.dphi) < 1e-12);
  CHECK(sol.contact_forces[0].state == ContactState::Stick);
  CHECK((sol.contact_forces[0].tangential - Vec2(2.0 * mu * 0.2, 0.0)).norm() < 1e-12);
  CHECK((sol.contact_forces[1].tangential - Vec2(-mu * 0.2, 0.0)).norm() < 1e-12);
  CHECK((sol.contact_forces[2].tangential - Vec2(-mu * 0.2, 0.0)).norm() < 1e-12);
  CHECK(step_is_balanced(audit_step(pb, sol)));
}

TEST_CASE("off-line anchor rotates to the independently bisected balance") {
  // Same slips with the anchor at (0, 1): both slip forces now have a moment
  // about the anchor, so the balance needs a small rotation.
  const double delta = 0.01, mu = 0.4;
  const Vec2 anchor(0, 1);
  const std::array<Vec2, 2> prev{Vec2(-1, 0), Vec2(1, 0)};
  const std::array<Vec2, 2> next{Vec2(-1 + delta, 0), Vec2(1 + delta, 0)};
  SlipProblem pb;
  pb.contacts = {contact(0, anchor, anchor, 0.6, mu, 0), contact(1, prev[0], next[0], 0.2, mu, 1),
                 contact(2, prev[1], next[1], 0.2, mu, 2)};
  pb.weight = 1.0;
  pb.length_scale = 1.0;
  auto moment = [&](double phi) {
    const Eigen::Rotation2Dd r(phi);
    double m = 0.0;
    for (int j = 0; j < 2; ++j) {
      const Vec2 q = anchor + r * (next[j] - anchor);
      const Vec2 f = -mu * 0.2 * (q - prev[j]).normalized();
      m += cross2(q - anchor, f);
    }
    return m;
  };
  double lo = -0.1, hi = 0.1;
  REQUIRE(moment(lo) * moment(hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (moment(lo) * moment(mid) <= 0.0 ? hi : lo) = mid;
  }
  StepOptions forced;
  forced.forced_anchor = 0;
  const auto sol = solve_stick_slip(pb, forced);
  CHECK(sol.dphi == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
  CHECK(step_is_balanced(audit_step(pb, sol)));
}

TEST_CASE("no contact strong enough to stick") {
  // Equal normals: any anchor must resist the two others' full slip forces.
  SlipProblem pb;
  pb.contacts = {contact(0, Vec2(0, 1), Vec2(0, 1.2), 1.0 / 3, 0.4, 0),
                 contact(1, Vec2(-1, 0), Vec2(-1.2, -0.1), 1.0 / 3, 0.4, 1),
                 contact(2, Vec2(1, 0), Vec2(1.2, -0.1), 1.0 / 3, 0.4, 2)};
  pb.weight = 1.0;
  pb.length_scale = 1.0;
  bool rejected = false;
  try {
    solve_stick_slip(pb);
  } catch (const NoAnchor&) {
    rejected = true;
  } catch (const NoRoot&) {
    rejected = true;
  }
  CHECK(rejected);
  StepOptions lax;
  lax.allow_unanchored = true;
  const auto sol = solve_stick_slip(pb, lax);
  CHECK_FALSE(sol.anchored);
}

TEST_CASE("accepted steps of fixture deflations are in equilibrium") {
  for (const std::string name : {"I", "II", "III", "VI"}) {
    CAPTURE(name);
    const auto problems = deflation_problems(fixture_design(name), FrictionModel::constant(0.4), 1.0);
    CHECK(problems.size() > 50u);
    for (const auto& pb : problems) {
      StepSolution sol;
      try {
        sol = solve_stick_slip(pb);
      } catch (const NoAnchor&) {
        continue;
      } catch (const NoRoot&) {
        continue;
      }
      const auto audit = audit_step(pb, sol);
      CHECK(step_is_balanced(audit));
      CHECK(audit.sticking >= 1);

      // Forcing the chosen anchor reproduces the step.
      StepOptions forced;
      forced.forced_anchor = sol.anchor_id;
      if (sol.partner_id >= 0) forced.forced_partner = sol.partner_id;
      const auto again = solve_stick_slip(pb, forced);
      CHECK(again.dphi == doctest::Approx(sol.dphi).epsilon(1e-12));

      // Scaling the weight scales forces only.
      SlipProblem heavy = pb;
      heavy.weight *= 7.5;
      for (auto& c : heavy.contacts) c.normal *= 7.5;
      const auto scaled = solve_stick_slip(heavy);
      CHECK(scaled.anchor_id == sol.anchor_id);
      CHECK(std::abs(scaled.dphi - sol.dphi) < 1e-12);
      CHECK((scaled.translation - sol.translation).norm() < 1e-12 * pb.length_scale);
      for (std::size_t j = 0; j < sol.contact_forces.size(); ++j)
        CHECK((scaled.contact_forces[j].tangential - 7.5 * sol.contact_forces[j].tangential).norm() <
              1e-9 * heavy.weight);
    }
  }
}

TEST_CASE("symmetric design turns nowhere") {
  const auto problems = deflation_problems(fixture_design("II"), FrictionModel::constant(0.4), 1.0);
  for (const auto& pb : problems) {
    StepSolution sol;
    try {
      sol = solve_stick_slip(pb);
    } catch (const CrawlerError&) {
      continue;
    }
    CHECK(std::abs(sol.dphi) < 1e-9);
  }
}

TEST_CASE("design III at 140 degrees loads v6 hardest") {
  const auto d = fixture_design("III");
  Gait gait(d);
  Trajectory t;
  RestPose pose = gait.run_inflation(gait.initial_pose(180.0), 180.0, 140.0, 0.5, t);
  REQUIRE(pose.contact_ids() == std::vector<int>{5, 7, 8});
  const auto pb = make_slip_problem(gait.pattern(), pose, gait.shape(140.5), FrictionModel::constant(0.4), 1.0);
  std::array<Vec2, 3> pts;
  for (int i = 0; i < 3; ++i) pts[i] = pose.contacts[i].world_xy;
  const Eigen::Vector3d lam = barycentric(pts[0], pts[1], pts[2], pose.com_proj);
  int heaviest = 0;
  for (int i = 1; i < 3; ++i)
    if (lam[i] > lam[heaviest]) heaviest = i;
  CHECK(pose.contacts[heaviest].vertex_id == 5);
  double best = 0.0;
  int best_id = -1;
  for (const auto& c : pb.contacts)
    if (c.normal > best) best = c.normal, best_id = c.vertex_id;
  CHECK(best_id == 5);
}

}  // TEST_SUITE
