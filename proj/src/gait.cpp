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

#include "crawler/gait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "crawler/error.hpp"

namespace crawler {

namespace {

using Vec2 = Eigen::Vector2d;

constexpr double kPi = std::numbers::pi;
constexpr double kRadToDeg = 180.0 / kPi;
constexpr double kStraightAlphaMerge = 10.0;  // degrees

double wrap_pi(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

const Facet& facet_with(const std::vector<Facet>& facets, const std::vector<int>& ids) {
  for (const auto& f : facets)
    if (f.ids == ids) return f;
  throw Degenerate("contact set is not a support facet");
}

bool is_flat_pose(const RestPose& p) {
  return static_cast<int>(p.contacts.size()) == kNumVertices;
}

std::vector<double> beta_steps(double from, double to, double dbeta) {
  std::vector<double> out;
  const double span = std::abs(to - from);
  const int n = static_cast<int>(std::ceil(span / dbeta - 1e-9));
  const double dir = to > from ? 1.0 : -1.0;
  for (int i = 1; i <= n; ++i) out.push_back(i == n ? to : from + dir * dbeta * i);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string ids_label(const std::vector<int>& ids) {
  std::string s;
  for (int id : ids) {
    if (!s.empty()) s += ' ';
    s += vertex_label(id);
  }
  return s;
}

std::vector<int> parse_ids(const std::string& s) {
  std::vector<int> ids;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || tok[0] != 'v') throw FormatError("bad vertex label " + tok);
    ids.push_back(std::stoi(tok.substr(1)) - 1);
  }
  return ids;
}

// Rotation about pivot that best maps next's contacts onto prev's, over the
// contacts both share; zero with fewer than two.
double min_slip_turn(const RestPose& prev, const RestPose& next, const Vec2& pivot) {
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  int common = 0;
  for (const auto& c : next.contacts)
    for (const auto& pc : prev.contacts)
      if (pc.vertex_id == c.vertex_id) {
        h += (c.world_xy - pivot) * (pc.world_xy - pivot).transpose();
        ++common;
      }
  if (common < 2) return 0.0;
  return std::atan2(h(0, 1) - h(1, 0), h(0, 0) + h(1, 1));
}

// Heading change of the inflation stroke from shape `from` to shape `to` with
// the given contacts kept, in the zero-heading frame.
double inflation_turn(const CreasePattern& p, const FoldState& from, const FoldState& to,
                   const std::vector<int>& ids) {
  const auto place = [&](const FoldState& s) {
    return place_on_facet(p, s, facet_with(hull_facets(p, s), ids), 0.0, Vec2::Zero());
  };
  return min_slip_turn(place(from), place(to), Vec2::Zero());
}

}  // namespace

void ActuationSchedule::validate() const {
  if (!(beta_min >= 120.0 && beta_min < beta_max && beta_max <= 180.0))
    throw InvalidDesign("actuation range must satisfy 120 <= beta_min < beta_max <= 180");
  if (!(dbeta > 0.0)) throw InvalidDesign("beta step must be positive");
  if (cycles < 0) throw InvalidDesign("cycle count must be non-negative");
}

std::string to_string(FailureReason r) {
  switch (r) {
    case FailureReason::None: return "none";
    case FailureReason::NoFoldBranch: return "no_fold_branch";
    case FailureReason::CannotStand: return "cannot_stand";
    case FailureReason::FacetCollision: return "facet_collision";
    case FailureReason::NoAnchor: return "no_anchor";
  }
  return "none";
}

std::string to_string(Phase p) { return p == Phase::Inflation ? "inflation" : "deflation"; }

std::string to_string(EventKind k) {
  return k == EventKind::ContactChange ? "contact_change" : "tip_over";
}

std::string to_string(ModeKind k) {
  switch (k) {
    case ModeKind::Straight: return "straight";
    case ModeKind::Left: return "left";
    case ModeKind::Right: return "right";
  }
  return "straight";
}

std::string to_string(ModeCategory c) {
  switch (c) {
    case ModeCategory::None: return "none";
    case ModeCategory::SingleStraight: return "single_straight";
    case ModeCategory::SingleTurn: return "single_turn";
    case ModeCategory::StraightAndTurn: return "straight_and_turn";
    case ModeCategory::LeftAndRight: return "left_and_right";
    case ModeCategory::TwoStraight: return "two_straight";
    case ModeCategory::ThreePlus: return "three_plus";
  }
  return "none";
}

ModeKind parse_mode_kind(const std::string& s) {
  for (auto k : {ModeKind::Straight, ModeKind::Left, ModeKind::Right})
    if (to_string(k) == s) return k;
  throw FormatError("unknown mode kind '" + s + "'");
}

ModeCategory parse_mode_category(const std::string& s) {
  for (auto c : {ModeCategory::None, ModeCategory::SingleStraight, ModeCategory::SingleTurn,
                 ModeCategory::StraightAndTurn, ModeCategory::LeftAndRight,
                 ModeCategory::TwoStraight, ModeCategory::ThreePlus})
    if (to_string(c) == s) return c;
  throw FormatError("unknown mode category '" + s + "'");
}

Gait::Gait(const VertexDesign& d) : tracker_(build_pattern(d)) {}

const FoldState& Gait::shape(double beta_deg) { return tracker_.at(beta_deg); }

const FoldState& Gait::checked_shape(double beta_deg) {
  const FoldState& s = tracker_.at(beta_deg);
  if (detect_self_intersection(pattern(), s))
    throw FacetCollision("panels collide at beta = " + fmt(beta_deg) + " deg");
  return s;
}

RestPose Gait::initial_pose(double beta_deg) {
  return find_resting_pose(pattern(), checked_shape(beta_deg));
}

RestPose Gait::reseat(const RestPose& prev, const RestPose& next, const FoldState& s) const {
  // Keep the contacts that persist where they were; with fewer than two of
  // them the heading is kept as well.
  std::vector<Vec2> a, b;
  for (const auto& c : next.contacts)
    for (const auto& pc : prev.contacts)
      if (pc.vertex_id == c.vertex_id) {
        a.push_back(c.world_xy);
        b.push_back(pc.world_xy);
      }
  double turn = 0.0;
  Vec2 shift = Vec2::Zero();
  if (a.size() == 1) {
    shift = b[0] - a[0];
  } else if (a.size() >= 2) {
    Vec2 ca = Vec2::Zero(), cb = Vec2::Zero();
    for (std::size_t i = 0; i < a.size(); ++i) {
      ca += a[i];
      cb += b[i];
    }
    ca /= static_cast<double>(a.size());
    cb /= static_cast<double>(b.size());
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < a.size(); ++i) h += (a[i] - ca) * (b[i] - cb).transpose();
    turn = std::atan2(h(0, 1) - h(1, 0), h(0, 0) + h(1, 1));
    shift = cb - Eigen::Rotation2Dd(turn).toRotationMatrix() * ca;
  }
  const Vec2 com = Eigen::Rotation2Dd(turn).toRotationMatrix() * next.com_proj + shift;
  const auto facets = hull_facets(pattern(), s);
  RestPose pose = place_on_facet(pattern(), s, facet_with(facets, next.contact_ids()),
                                 next.heading + turn, com);
  pose.tipped = next.tipped;
  return pose;
}

void Gait::append(Trajectory& out, Phase phase, double beta, const RestPose& pose,
                  const RestPose& prev, const StepSolution* step) {
  TrajectorySample s;
  s.step = static_cast<int>(out.samples.size());
  s.phase = phase;
  s.beta_deg = beta;
  s.com_xy = pose.com_proj;
  s.heading = pose.heading;
  s.contact_ids = pose.contact_ids();
  if (step) {
    s.anchor_id = step->anchor_id;
    s.partner_id = step->partner_id;
    s.anchored = step->anchored;
    s.forces = step->contact_forces;
  }
  if (!is_flat_pose(prev) && !is_flat_pose(pose) && contact_change(prev, pose)) {
    const EventKind kind = pose.tipped ? EventKind::TipOver : EventKind::ContactChange;
    s.event = kind;
    out.events.push_back({kind, phase, beta, s.step, prev.contact_ids(), pose.contact_ids()});
  }
  out.samples.push_back(std::move(s));
}

RestPose Gait::run_inflation(RestPose pose, double from_beta, double to_beta, double dbeta,
                             Trajectory& out) {
  for (double beta : beta_steps(from_beta, to_beta, dbeta)) {
    const FoldState& s = checked_shape(beta);
    RestPose next = find_resting_pose(pattern(), s, pose);
    // The COM stays put; the orientation is the one that slides the persisting
    // contacts least, which does not depend on how the body frame is chosen.
    if (!is_flat_pose(pose) && !is_flat_pose(next)) {
      const double turn = min_slip_turn(pose, next, next.com_proj);
      if (turn != 0.0) {
        const auto facets = hull_facets(pattern(), s);
        const bool tipped = next.tipped;
        next = place_on_facet(pattern(), s, facet_with(facets, next.contact_ids()),
                              next.heading + turn, next.com_proj);
        next.tipped = tipped;
      }
    }
    append(out, Phase::Inflation, beta, next, pose, nullptr);
    pose = std::move(next);
  }
  return pose;
}

RestPose Gait::run_deflation(RestPose pose, double from_beta, double to_beta, double dbeta,
                             const GaitOptions& options, Trajectory& out) {
  StepOptions step_options;
  step_options.allow_unanchored = options.allow_unanchored;
  double prev_beta = from_beta;
  for (double beta : beta_steps(from_beta, to_beta, dbeta)) {
    const FoldState& s = checked_shape(beta);
    const RestPose candidate = find_resting_pose(pattern(), s, pose);
    RestPose next;
    if (is_flat_pose(candidate) || is_flat_pose(pose) || contact_change(pose, candidate) ||
        candidate.tipped) {
      next = reseat(pose, candidate, s);
      append(out, Phase::Deflation, beta, next, pose, nullptr);
    } else {
      const StepSolution step =
          solve_stick_slip(pattern(), pose, s, options.friction, options.weight, step_options);
      const auto facets = hull_facets(pattern(), s);
      next = place_on_facet(pattern(), s, facet_with(facets, pose.contact_ids()),
                            pose.heading + step.dphi, step.com);
      append(out, Phase::Deflation, beta, next, pose, &step);
      const auto back = inflation_turn(pattern(), s, checked_shape(prev_beta), pose.contact_ids());
      out.samples.back().cycle_turn = step.dphi + back;
    }
    pose = std::move(next);
    prev_beta = beta;
  }
  return pose;
}

Trajectory run_cycles(const VertexDesign& d, const ActuationSchedule& schedule,
                      const GaitOptions& options) {
  schedule.validate();
  Trajectory out;
  std::optional<Gait> gait;
  try {
    gait.emplace(d);
  } catch (const NoClosure& e) {
    out.failure = FailureReason::NoFoldBranch;
    out.failure_message = e.what();
    return out;
  }
  try {
    // The sheet starts flat; its pose at beta_max is whatever folding down
    // from 180 leaves it in. The lead-in itself is not part of the output.
    RestPose pose = gait->initial_pose(180.0);
    if (schedule.beta_max < 180.0) {
      Trajectory lead_in;
      pose = gait->run_inflation(pose, 180.0, schedule.beta_max, schedule.dbeta, lead_in);
    }
    TrajectorySample first;
    first.beta_deg = schedule.beta_max;
    first.com_xy = pose.com_proj;
    first.heading = pose.heading;
    first.contact_ids = pose.contact_ids();
    out.samples.push_back(first);
    for (int c = 0; c < schedule.cycles; ++c) {
      pose = gait->run_inflation(pose, schedule.beta_max, schedule.beta_min, schedule.dbeta, out);
      pose = gait->run_deflation(pose, schedule.beta_min, schedule.beta_max, schedule.dbeta,
                                 options, out);
    }
  } catch (const NoClosure& e) {
    out.failure = FailureReason::NoFoldBranch;
    out.failure_message = e.what();
  } catch (const BranchJump& e) {
    out.failure = FailureReason::NoFoldBranch;
    out.failure_message = e.what();
  } catch (const FacetCollision& e) {
    out.failure = FailureReason::FacetCollision;
    out.failure_message = e.what();
  } catch (const NoAnchor& e) {
    out.failure = FailureReason::NoAnchor;
    out.failure_message = e.what();
  } catch (const NoRoot& e) {
    out.failure = FailureReason::NoAnchor;
    out.failure_message = e.what();
  } catch (const NoStablePose& e) {
    out.failure = FailureReason::CannotStand;
    out.failure_message = e.what();
  } catch (const Unstable& e) {
    out.failure = FailureReason::CannotStand;
    out.failure_message = e.what();
  } catch (const Degenerate& e) {
    out.failure = FailureReason::CannotStand;
    out.failure_message = e.what();
  }
  return out;
}

CurvatureProfile curvature_profile(const std::vector<Vec2>& path) {
  if (path.size() < 3) throw TooShort("curvature needs at least three samples");
  CurvatureProfile c;
  c.kappa.assign(path.size(), 0.0);
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const Vec2 u = path[i] - path[i - 1];
    const Vec2 v = path[i + 1] - path[i];
    const Vec2 w = path[i + 1] - path[i - 1];
    const double denom = u.norm() * v.norm() * w.norm();
    if (denom <= 0.0) continue;
    c.kappa[i] = 2.0 * (u.x() * v.y() - u.y() * v.x()) / denom;
  }
  double sx = 0.0, sy = 0.0;
  std::optional<double> last;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec2 d = path[i + 1] - path[i];
    const double len = d.norm();
    c.length += len;
    if (len <= 0.0) continue;
    const double ang = std::atan2(d.y(), d.x());
    sx += d.x();
    sy += d.y();
    if (last) c.kappa_total += std::abs(wrap_pi(ang - *last));
    last = ang;
  }
  c.chord = (path.back() - path.front()).norm();
  c.alpha_deg = (sx == 0.0 && sy == 0.0) ? 0.0 : std::atan2(sy, sx) * kRadToDeg;
  return c;
}

double ModeReport::length_min() const {
  double m = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i)
    m = i == 0 ? modes[i].length : std::min(m, modes[i].length);
  return m;
}

double ModeReport::length_sum() const {
  double s = 0.0;
  for (const auto& m : modes) s += m.length;
  return s;
}

namespace {

// Displacement of step i (from sample i-1) in the body frame it started from.
Vec2 body_step(const std::vector<TrajectorySample>& s, std::size_t i) {
  return Eigen::Rotation2Dd(-s[i - 1].heading).toRotationMatrix() *
         (s[i].com_xy - s[i - 1].com_xy);
}

// Metrics of the samples [lo, hi] of a deflation. Directions are taken in the
// body frame and turning from the per-cycle rotation, so a range reads the way
// the sheet moves when actuated repeatedly over it. Re-seat jumps are skipped.
Mode measure(const std::vector<TrajectorySample>& s, std::size_t lo, std::size_t hi,
             ModeKind kind, double frame) {
  Mode m;
  m.kind = kind;
  m.beta_lo = s[lo].beta_deg;
  m.beta_hi = s[hi].beta_deg;
  m.samples = static_cast<int>(hi - lo + 1);
  Vec2 chord = Vec2::Zero();
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    if (s[i].event) {
      ++m.n_change;
      continue;
    }
    const Vec2 d = body_step(s, i);
    m.length += d.norm();
    chord += d;
    m.kappa_total += std::abs(s[i].cycle_turn);
  }
  m.chord = chord.norm();
  m.alpha_deg = chord.isZero(0.0) ? 0.0 : wrap_pi(std::atan2(chord.y(), chord.x()) - frame) * kRadToDeg;
  return m;
}

struct Run {
  std::size_t lo, hi;
  ModeKind kind;
};

// Runs of one kind over samples [lo, hi], cut at contact changes; runs shorter
// than kMinModeSamples are absorbed by their longer neighbour.
std::vector<Run> segment_runs(const std::vector<TrajectorySample>& s,
                              const std::vector<ModeKind>& kind, std::size_t lo, std::size_t hi,
                              double frame) {
  std::vector<Run> runs;
  for (std::size_t i = lo; i <= hi; ++i) {
    // The segment start only anchors the first step.
    const ModeKind k = i == lo && i < hi ? kind[i + 1] : kind[i];
    if (!runs.empty() && runs.back().kind == k && !s[i].event) {
      runs.back().hi = i;
    } else {
      runs.push_back({i, i, k});
    }
  }
  // Short runs are absorbed by their longer neighbour.
  bool merged = true;
  while (merged && runs.size() > 1) {
    merged = false;
    std::size_t shortest = runs.size();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto len = runs[i].hi - runs[i].lo + 1;
      if (len < static_cast<std::size_t>(kMinModeSamples) &&
          (shortest == runs.size() ||
           len < runs[shortest].hi - runs[shortest].lo + 1))
        shortest = i;
    }
    if (shortest == runs.size()) break;
    const std::size_t i = shortest;
    std::size_t into;
    if (i == 0) {
      into = 1;
    } else if (i + 1 == runs.size()) {
      into = i - 1;
    } else {
      const auto left = runs[i - 1].hi - runs[i - 1].lo;
      const auto right = runs[i + 1].hi - runs[i + 1].lo;
      into = left >= right ? i - 1 : i + 1;
    }
    runs[into].lo = std::min(runs[into].lo, runs[i].lo);
    runs[into].hi = std::max(runs[into].hi, runs[i].hi);
    runs.erase(runs.begin() + static_cast<long>(i));
    // Neighbours of the same kind join up.
    for (std::size_t k = 0; k + 1 < runs.size();) {
      if (runs[k].kind == runs[k + 1].kind) {
        const Mode a = measure(s, runs[k].lo, runs[k].hi, runs[k].kind, frame);
        const Mode b = measure(s, runs[k + 1].lo, runs[k + 1].hi, runs[k + 1].kind, frame);
        if (runs[k].kind != ModeKind::Straight ||
            std::abs(wrap_pi((a.alpha_deg - b.alpha_deg) / kRadToDeg)) * kRadToDeg <
                kStraightAlphaMerge) {
          runs[k].hi = runs[k + 1].hi;
          runs.erase(runs.begin() + static_cast<long>(k + 1));
          continue;
        }
      }
      ++k;
    }
    merged = true;
  }

  return runs;
}

}  // namespace

ModeReport classify_deflation(const std::vector<TrajectorySample>& s, int n_change) {
  ModeReport r;
  r.n_change_total = n_change;
  const std::size_t n = s.size();
  if (n < 3) return r;
  for (const auto& x : s)
    if (!x.anchored) ++r.unanchored_steps;

  // The first step's direction defines the frame; left turns increase it.
  double frame = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const Vec2 d = body_step(s, i);
    if (!s[i].event && d.norm() > 0.0) {
      frame = std::atan2(d.y(), d.x());
      break;
    }
  }

  // Kind of each step from the curvature of the path traced under repeated
  // actuation at that beta: per-cycle turn over per-cycle advance.
  std::vector<ModeKind> kind(n, ModeKind::Straight);
  for (std::size_t i = 1; i < n; ++i) {
    const double ds = (s[i].com_xy - s[i - 1].com_xy).norm();
    const double turn = s[i].cycle_turn;
    if (s[i].event || turn == 0.0) continue;
    const bool straight = ds > 0.0 && std::abs(turn) < kStraightCurvature * ds;
    kind[i] = straight ? ModeKind::Straight : turn > 0.0 ? ModeKind::Left : ModeKind::Right;
  }
  // Re-seat samples carry no step of their own; they take the next step's kind.
  for (std::size_t i = n; i-- > 0;)
    if ((i == 0 || s[i].event) && i + 1 < n) kind[i] = kind[i + 1];

  // Steps without an anchor do not crawl; they split the deflation into
  // segments that are segmented on their own.
  for (std::size_t lo = 0; lo + 1 < n;) {
    std::size_t hi = lo;
    while (hi + 1 < n && s[hi + 1].anchored) ++hi;
    if (hi - lo + 1 >= static_cast<std::size_t>(kMinModeSamples))
      for (const auto& run : segment_runs(s, kind, lo, hi, frame))
        r.runs.push_back(measure(s, run.lo, run.hi, run.kind, frame));
    lo = hi + 1;
  }
  // Distinct modes: turns cluster by direction, straight runs by heading.
  for (const auto& m : r.runs) {
    Mode* home = nullptr;
    for (auto& c : r.modes) {
      if (c.kind != m.kind) continue;
      if (m.kind != ModeKind::Straight ||
          std::abs(wrap_pi((c.alpha_deg - m.alpha_deg) / kRadToDeg)) * kRadToDeg <
              kStraightAlphaMerge) {
        home = &c;
        break;
      }
    }
    if (!home) {
      r.modes.push_back(m);
      continue;
    }
    const double w = home->length + m.length;
    if (w > 0.0) {
      const double a0 = home->alpha_deg / kRadToDeg, a1 = m.alpha_deg / kRadToDeg;
      const double x = home->length * std::cos(a0) + m.length * std::cos(a1);
      const double y = home->length * std::sin(a0) + m.length * std::sin(a1);
      home->alpha_deg = std::atan2(y, x) * kRadToDeg;
    }
    home->beta_lo = std::min(home->beta_lo, m.beta_lo);
    home->beta_hi = std::max(home->beta_hi, m.beta_hi);
    home->length = w;
    home->chord += m.chord;
    home->kappa_total += m.kappa_total;
    home->n_change += m.n_change;
    home->samples += m.samples;
  }

  for (const auto& m : r.runs) {
    r.length_total += m.length;
    r.kappa_total += m.kappa_total;
  }
  if (r.modes.empty() && r.unanchored_steps > 0) {
    r.failure = FailureReason::NoAnchor;
    r.failure_message = "no contact sticks over enough of the deflation to crawl";
    return r;
  }

  int straight = 0, left = 0, right = 0;
  for (const auto& m : r.modes) {
    if (m.kind == ModeKind::Straight) ++straight;
    if (m.kind == ModeKind::Left) ++left;
    if (m.kind == ModeKind::Right) ++right;
  }
  const std::size_t count = r.modes.size();
  if (count == 1) {
    r.category = straight ? ModeCategory::SingleStraight : ModeCategory::SingleTurn;
  } else if (count == 2) {
    if (straight == 2) r.category = ModeCategory::TwoStraight;
    else if (straight == 1) r.category = ModeCategory::StraightAndTurn;
    else r.category = ModeCategory::LeftAndRight;
  } else if (count >= 3) {
    r.category = ModeCategory::ThreePlus;
  }
  (void)left;
  (void)right;
  return r;
}

ModeReport classify_trajectory(const Trajectory& t) {
  if (!t.ok()) {
    ModeReport r;
    r.failure = t.failure;
    r.failure_message = t.failure_message;
    return r;
  }
  // The first deflation, starting from the pose it deflates from.
  std::vector<TrajectorySample> deflation;
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    const bool first = i + 1 < t.samples.size() && t.samples[i].phase == Phase::Inflation &&
                       t.samples[i + 1].phase == Phase::Deflation;
    if (first || t.samples[i].phase == Phase::Deflation) deflation.push_back(t.samples[i]);
    else if (deflation.size() > 1) break;
  }
  if (!deflation.empty()) deflation.front().event.reset();
  int n_change = 0;
  if (deflation.size() > 1)
    for (const auto& e : t.events)
      if (e.phase == Phase::Deflation && e.step > deflation.front().step &&
          e.step <= deflation.back().step)
        ++n_change;
  return classify_deflation(deflation, n_change);
}

ModeReport classify_modes(const VertexDesign& d, const ClassifyOptions& options) {
  ActuationSchedule schedule;
  schedule.beta_max = options.beta_max;
  schedule.beta_min = options.beta_min;
  schedule.dbeta = options.dbeta;
  schedule.cycles = 1;
  return classify_trajectory(run_cycles(d, schedule, options.gait));
}

void write_trajectory_csv(const Trajectory& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "step,phase,beta_deg,com_x_mm,com_y_mm,heading_rad,contacts,event\n";
  for (const auto& s : t.samples) {
    out << s.step << ',' << to_string(s.phase) << ',' << fmt(s.beta_deg) << ','
        << fmt(s.com_xy.x()) << ',' << fmt(s.com_xy.y()) << ',' << fmt(s.heading) << ','
        << ids_label(s.contact_ids) << ',' << (s.event ? to_string(*s.event) : "") << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void write_forces_csv(const Trajectory& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "step,beta_deg,vertex,state,normal,capacity,ft_x,ft_y\n";
  for (const auto& s : t.samples) {
    for (const auto& f : s.forces) {
      out << s.step << ',' << fmt(s.beta_deg) << ',' << vertex_label(f.vertex_id) << ','
          << (f.state == ContactState::Stick ? "stick" : "slip") << ',' << fmt(f.normal) << ','
          << fmt(f.capacity) << ',' << fmt(f.tangential.x()) << ',' << fmt(f.tangential.y())
          << '\n';
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "step,phase,beta_deg,com_x_mm,com_y_mm,heading_rad,contacts,event")
    throw FormatError("not a trajectory file: " + path.string());
  Trajectory t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cols.push_back(cell);
    if (cols.size() == 7) cols.emplace_back();
    if (cols.size() != 8) throw FormatError("malformed trajectory row: " + line);
    TrajectorySample s;
    try {
      s.step = std::stoi(cols[0]);
      if (cols[1] != "inflation" && cols[1] != "deflation")
        throw FormatError("bad phase " + cols[1]);
      s.phase = cols[1] == "inflation" ? Phase::Inflation : Phase::Deflation;
      s.beta_deg = std::stod(cols[2]);
      s.com_xy = Vec2(std::stod(cols[3]), std::stod(cols[4]));
      s.heading = std::stod(cols[5]);
      s.contact_ids = parse_ids(cols[6]);
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception&) {
      throw FormatError("malformed trajectory row: " + line);
    }
    if (cols[7] == "contact_change") s.event = EventKind::ContactChange;
    else if (cols[7] == "tip_over") s.event = EventKind::TipOver;
    else if (!cols[7].empty()) throw FormatError("bad event " + cols[7]);
    if (s.event) t.events.push_back({*s.event, s.phase, s.beta_deg, s.step, {}, s.contact_ids});
    t.samples.push_back(std::move(s));
  }
  return t;
}

void to_json(nlohmann::json& j, const Mode& m) {
  j = nlohmann::json{{"kind", to_string(m.kind)},
                     {"beta_lo_deg", m.beta_lo},
                     {"beta_hi_deg", m.beta_hi},
                     {"length_mm", m.length},
                     {"chord_mm", m.chord},
                     {"alpha_deg", m.alpha_deg},
                     {"kappa_total_rad", m.kappa_total},
                     {"n_change", m.n_change},
                     {"samples", m.samples}};
}

void from_json(const nlohmann::json& j, Mode& m) {
  m = Mode{};
  m.kind = parse_mode_kind(j.at("kind").get<std::string>());
  m.beta_lo = j.at("beta_lo_deg").get<double>();
  m.beta_hi = j.at("beta_hi_deg").get<double>();
  m.length = j.at("length_mm").get<double>();
  m.chord = j.at("chord_mm").get<double>();
  m.alpha_deg = j.at("alpha_deg").get<double>();
  m.kappa_total = j.at("kappa_total_rad").get<double>();
  m.n_change = j.at("n_change").get<int>();
  m.samples = j.at("samples").get<int>();
}

void to_json(nlohmann::json& j, const ModeReport& r) {
  j = nlohmann::json{{"feasibility", r.crawls() ? "crawls" : "fails"},
                     {"failure", to_string(r.failure)},
                     {"category", to_string(r.category)},
                     {"modes", r.modes},
                     {"runs", r.runs},
                     {"n_change_total", r.n_change_total},
                     {"unanchored_steps", r.unanchored_steps},
                     {"length_total_mm", r.length_total},
                     {"kappa_total_rad", r.kappa_total},
                     {"length_min_mm", r.length_min()},
                     {"length_sum_mm", r.length_sum()}};
  if (!r.failure_message.empty()) j["failure_message"] = r.failure_message;
}

}  // namespace crawler
