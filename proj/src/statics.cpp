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

#include "crawler/statics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

#include "crawler/error.hpp"

namespace crawler {

namespace {

using Vec2 = Eigen::Vector2d;

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kScanHalfWidth = 20.0 * kDeg;
constexpr double kScanStep = 0.5 * kDeg;

Eigen::Matrix2d rot(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Friction and geometry for one anchor candidate, with forces in units of W.
class AnchorCandidate {
 public:
  AnchorCandidate(const SlipProblem& pb, std::size_t anchor) : pb_(pb), a_(anchor) {}

  std::vector<Vec2> place(double dphi) const {
    const Eigen::Matrix2d r = rot(pb_.heading + dphi);
    const Vec2 t = pb_.contacts[a_].prev_world - r * pb_.contacts[a_].next_laid;
    std::vector<Vec2> out;
    out.reserve(pb_.contacts.size());
    for (const auto& c : pb_.contacts) out.push_back(r * c.next_laid + t);
    return out;
  }

  Vec2 com(double dphi) const {
    const Eigen::Matrix2d r = rot(pb_.heading + dphi);
    const Vec2 t = pb_.contacts[a_].prev_world - r * pb_.contacts[a_].next_laid;
    return r * pb_.next_com_laid + t;
  }

  // Slip friction on every non-anchor contact, normalised by the weight.
  std::vector<Vec2> slip_forces(const std::vector<Vec2>& q) const {
    std::vector<Vec2> f(q.size(), Vec2::Zero());
    const double still = 1e-12 * pb_.length_scale;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (j == a_) continue;
      const Vec2 du = q[j] - pb_.contacts[j].prev_world;
      const double len = du.norm();
      if (len <= still) continue;
      f[j] = -(pb_.contacts[j].mu * pb_.contacts[j].normal / pb_.weight) * du / len;
    }
    return f;
  }

  double moment(double dphi) const {
    const auto q = place(dphi);
    const auto f = slip_forces(q);
    double m = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) m += cross2(q[j] - q[a_], f[j]);
    return m;
  }

 private:
  const SlipProblem& pb_;
  std::size_t a_;
};

std::optional<double> nearest_root(const AnchorCandidate& cand, double length_scale) {
  const int n = static_cast<int>(std::lround(2.0 * kScanHalfWidth / kScanStep));
  std::vector<double> x(n + 1), m(n + 1);
  for (int i = 0; i <= n; ++i) {
    x[i] = -kScanHalfWidth + kScanStep * i;
    m[i] = cand.moment(x[i]);
  }
  std::optional<double> best;
  auto consider = [&](double r) {
    // A sign change across a discontinuity is not a balance.
    if (std::abs(cand.moment(r)) > 1e-9 * length_scale) return;
    if (!best || std::abs(r) < std::abs(*best)) best = r;
  };
  for (int i = 0; i < n; ++i) {
    if (m[i] == 0.0) {
      consider(x[i]);
      continue;
    }
    if ((m[i] < 0.0) == (m[i + 1] < 0.0) || m[i + 1] == 0.0) continue;
    double lo = x[i], hi = x[i + 1], mlo = m[i];
    // Bisect past kRootTol down to machine resolution so the balance residual
    // itself is negligible; a jump in the residual survives and is rejected.
    while (true) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double mm = cand.moment(mid);
      if (mm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((mm < 0.0) == (mlo < 0.0)) {
        lo = mid;
        mlo = mm;
      } else {
        hi = mid;
      }
    }
    consider(0.5 * (lo + hi));
  }
  if (m[n] == 0.0) consider(x[n]);
  return best;
}

}  // namespace

FrictionModel FrictionModel::constant(double mu_s) {
  if (!(mu_s > 0.0)) throw FormatError("friction coefficient must be positive");
  FrictionModel m;
  m.points_ = {{0.0, mu_s}};
  return m;
}

FrictionModel FrictionModel::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw FormatError("friction table is empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [psi, mu] = points[i];
    if (!(mu > 0.0)) throw FormatError("friction coefficient must be positive");
    if (psi < 0.0 || psi > 180.0) throw FormatError("friction table angle outside [0, 180]");
    if (i > 0 && !(psi > points[i - 1].first))
      throw FormatError("friction table angles must increase strictly");
  }
  FrictionModel m;
  m.points_ = std::move(points);
  return m;
}

FrictionModel FrictionModel::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open friction table " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("psi_deg,mu_s", 0) != 0)
    throw FormatError("friction table must start with the header psi_deg,mu_s");
  std::vector<std::pair<double, double>> pts;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b))
      throw FormatError("malformed friction row: " + line);
    try {
      pts.emplace_back(std::stod(a), std::stod(b));
    } catch (const std::exception&) {
      throw FormatError("malformed friction row: " + line);
    }
  }
  return table(std::move(pts));
}

double FrictionModel::mu(double psi_deg) const {
  if (points_.size() == 1 || psi_deg <= points_.front().first) return points_.front().second;
  if (psi_deg >= points_.back().first) return points_.back().second;
  const auto hi = std::upper_bound(points_.begin(), points_.end(), psi_deg,
                                   [](double v, const auto& p) { return v < p.first; });
  const auto lo = hi - 1;
  const double t = (psi_deg - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

double static_friction(double normal, double psi_deg, const FrictionModel& m) {
  return m.mu(psi_deg) * normal;
}

std::array<double, 3> normal_forces(const std::array<Vec2, 3>& c, const Vec2& com, double weight,
                                    double length_scale) {
  const double area2 = cross2(c[1] - c[0], c[2] - c[0]);
  if (std::abs(area2) * 0.5 < 1e-6 * length_scale * length_scale)
    throw Degenerate("contact triangle is degenerate");
  const double l1 = cross2(c[2] - c[1], com - c[1]) / area2;
  const double l2 = cross2(c[0] - c[2], com - c[2]) / area2;
  const double l3 = 1.0 - l1 - l2;
  if (l1 < -1e-9 || l2 < -1e-9 || l3 < -1e-9)
    throw Unstable("center of mass projects outside the contact triangle");
  return {weight * l1, weight * l2, weight * l3};
}

std::vector<double> distribute_normal_forces(const std::vector<Vec2>& contacts, const Vec2& com,
                                             double weight, double length_scale) {
  const std::size_t n = contacts.size();
  if (n < 3) throw Degenerate("fewer than three contacts");
  if (n == 3) {
    const auto f = normal_forces({contacts[0], contacts[1], contacts[2]}, com, weight, length_scale);
    return {f[0], f[1], f[2]};
  }
  // Least-norm solution of the three balance equations; contacts that come
  // out negative are released one at a time until all remaining ones push.
  std::vector<bool> active(n, true);
  const Vec2 origin = com;
  while (true) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i]) idx.push_back(i);
    if (idx.size() < 3) throw Unstable("center of mass outside the support polygon");
    Eigen::MatrixXd a(3, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Vec2 r = (contacts[idx[k]] - origin) / length_scale;
      a(0, k) = r.x();
      a(1, k) = r.y();
      a(2, k) = 1.0;
    }
    const Eigen::Vector3d rhs(0.0, 0.0, 1.0);
    const Eigen::Matrix3d gram = a * a.transpose();
    if (std::abs(gram.determinant()) < 1e-18) throw Degenerate("contacts are collinear");
    const Eigen::VectorXd lam = a.transpose() * gram.ldlt().solve(rhs);
    std::size_t worst = idx.size();
    double worst_val = -1e-12;
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (lam[k] < worst_val) {
        worst_val = lam[k];
        worst = k;
      }
    if (worst == idx.size()) {
      std::vector<double> out(n, 0.0);
      for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = weight * std::max(0.0, lam[k]);
      return out;
    }
    active[idx[worst]] = false;
  }
}

namespace {

// Both ends of a contacting edge stick: the placement is rigid, so the only
// question is whether the pair can carry the slip load.
struct EdgeAnchor {
  std::size_t first = 0;
  std::size_t second = 0;
  double dphi = 0.0;
  std::vector<Vec2> q;
  std::vector<Vec2> f;  // slip forces, zero at both ends
  Vec2 f_first = Vec2::Zero();
  Vec2 f_second = Vec2::Zero();
  double margin = 0.0;
};

bool share_panel(const SlipContact& a, const SlipContact& b) {
  for (int pa : a.panels)
    if (std::find(b.panels.begin(), b.panels.end(), pa) != b.panels.end()) return true;
  return false;
}

EdgeAnchor solve_edge_anchor(const SlipProblem& pb, std::size_t i, std::size_t j) {
  const auto& ci = pb.contacts[i];
  const auto& cj = pb.contacts[j];
  EdgeAnchor e;
  e.first = i;
  e.second = j;
  const Vec2 laid = cj.next_laid - ci.next_laid;
  const Vec2 world = cj.prev_world - ci.prev_world;
  const double heading = std::atan2(world.y(), world.x()) - std::atan2(laid.y(), laid.x());
  e.dphi = std::remainder(heading - pb.heading, 2.0 * std::numbers::pi);
  const Eigen::Matrix2d r = rot(pb.heading + e.dphi);
  const Vec2 t = ci.prev_world - r * ci.next_laid;
  const double still = 1e-12 * pb.length_scale;
  Vec2 sum = Vec2::Zero();
  double moment = 0.0;
  for (std::size_t k = 0; k < pb.contacts.size(); ++k) {
    const auto& c = pb.contacts[k];
    e.q.push_back(r * c.next_laid + t);
    Vec2 fk = Vec2::Zero();
    const Vec2 du = e.q.back() - c.prev_world;
    if (k != i && k != j && du.norm() > still) fk = -(c.mu * c.normal / pb.weight) * du / du.norm();
    e.f.push_back(fk);
    sum += fk;
    moment += cross2(e.q.back() - ci.prev_world, fk);
  }
  // f_second = along * u + across * w carries the moment; f_first takes the rest.
  const Vec2 arm = e.q[j] - e.q[i];
  const double len = arm.norm();
  if (len < 1e-9 * pb.length_scale) {
    e.margin = -std::numeric_limits<double>::infinity();
    return e;
  }
  const Vec2 u = arm / len;
  const Vec2 w(-u.y(), u.x());
  const double across = -moment / len;
  const double cap_i = ci.mu * ci.normal / pb.weight;
  const double cap_j = cj.mu * cj.normal / pb.weight;
  auto split = [&](double along) {
    const Vec2 fj = along * u + across * w;
    const Vec2 fi = -sum - fj;
    return std::pair{fi, fj};
  };
  auto margin = [&](double along) {
    const auto [fi, fj] = split(along);
    return std::min(cap_i - fi.norm(), cap_j - fj.norm());
  };
  // The margin is concave in the free split, so a ternary search finds it.
  double lo = -(sum.norm() + cap_i + cap_j + std::abs(across)), hi = -lo;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (margin(m1) < margin(m2))
      lo = m1;
    else
      hi = m2;
  }
  const double best = 0.5 * (lo + hi);
  std::tie(e.f_first, e.f_second) = split(best);
  e.margin = margin(best);
  return e;
}

}  // namespace

StepSolution solve_stick_slip(const SlipProblem& pb, const StepOptions& options) {
  const std::size_t n = pb.contacts.size();
  struct Result {
    std::size_t anchor;
    double dphi;
    double margin;  // in units of W
  };
  const bool forced_edge = options.forced_anchor && options.forced_partner;
  std::vector<Result> found;
  if (!forced_edge) {
    for (std::size_t a = 0; a < n; ++a) {
      if (options.forced_anchor && pb.contacts[a].vertex_id != *options.forced_anchor) continue;
      const AnchorCandidate cand(pb, a);
      const auto root = nearest_root(cand, pb.length_scale);
      if (!root) continue;
      const auto q = cand.place(*root);
      const auto f = cand.slip_forces(q);
      Vec2 sum = Vec2::Zero();
      for (const auto& fj : f) sum += fj;
      const double capacity = pb.contacts[a].mu * pb.contacts[a].normal / pb.weight;
      found.push_back({a, *root, capacity - sum.norm()});
    }
  }

  const Result* best = nullptr;
  for (const auto& r : found)
    if (r.margin >= -1e-12 && (!best || r.margin > best->margin)) best = &r;

  std::optional<EdgeAnchor> edge;
  if (!best && !(options.forced_anchor && !options.forced_partner)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!share_panel(pb.contacts[i], pb.contacts[j])) continue;
        if (forced_edge) {
          const int a = pb.contacts[i].vertex_id, b = pb.contacts[j].vertex_id;
          const bool match = (a == *options.forced_anchor && b == *options.forced_partner) ||
                             (b == *options.forced_anchor && a == *options.forced_partner);
          if (!match) continue;
        }
        auto cand = solve_edge_anchor(pb, i, j);
        if (!edge || cand.margin > edge->margin) edge = std::move(cand);
      }
  }
  if (found.empty() && !edge) throw NoRoot("no moment balance within +-20 deg for any anchor");

  bool anchored = best != nullptr || (edge && edge->margin >= -1e-12);
  if (!anchored) {
    if (!options.allow_unanchored) throw NoAnchor("no contact can stick");
    for (const auto& r : found)
      if (!best || r.margin > best->margin) best = &r;
    if (best && edge && edge->margin > best->margin) best = nullptr;
  }

  StepSolution sol;
  sol.anchored = anchored;
  if (best) {
    const AnchorCandidate cand(pb, best->anchor);
    sol.anchor_id = pb.contacts[best->anchor].vertex_id;
    sol.dphi = best->dphi;
    sol.next_world = cand.place(best->dphi);
    sol.com = cand.com(best->dphi);
    sol.stick_margin = best->margin * pb.weight;
    const auto f = cand.slip_forces(sol.next_world);
    Vec2 sum = Vec2::Zero();
    for (const auto& fj : f) sum += fj;
    for (std::size_t j = 0; j < n; ++j) {
      ContactForce cf;
      cf.vertex_id = pb.contacts[j].vertex_id;
      cf.normal = pb.contacts[j].normal;
      cf.capacity = pb.contacts[j].mu * pb.contacts[j].normal;
      if (j == best->anchor) {
        cf.tangential = -sum * pb.weight;
        cf.state = ContactState::Stick;
      } else {
        cf.tangential = f[j] * pb.weight;
        cf.state = ContactState::Slip;
      }
      sol.contact_forces.push_back(cf);
    }
  } else {
    const auto& e = *edge;
    sol.anchor_id = pb.contacts[e.first].vertex_id;
    sol.partner_id = pb.contacts[e.second].vertex_id;
    sol.dphi = e.dphi;
    sol.next_world = e.q;
    const Eigen::Matrix2d r = rot(pb.heading + e.dphi);
    sol.com = r * pb.next_com_laid + (pb.contacts[e.first].prev_world - r * pb.contacts[e.first].next_laid);
    sol.stick_margin = e.margin * pb.weight;
    for (std::size_t j = 0; j < n; ++j) {
      ContactForce cf;
      cf.vertex_id = pb.contacts[j].vertex_id;
      cf.normal = pb.contacts[j].normal;
      cf.capacity = pb.contacts[j].mu * pb.contacts[j].normal;
      cf.state = ContactState::Slip;
      cf.tangential = e.f[j] * pb.weight;
      if (j == e.first || j == e.second) {
        cf.state = ContactState::Stick;
        cf.tangential = (j == e.first ? e.f_first : e.f_second) * pb.weight;
      }
      sol.contact_forces.push_back(cf);
    }
  }
  sol.translation = sol.com - pb.prev_com;
  return sol;
}

SlipProblem make_slip_problem(const CreasePattern& p, const RestPose& prev, const FoldState& next,
                              const FrictionModel& friction, double weight) {
  const auto ids = prev.contact_ids();
  const auto facets = hull_facets(p, next);
  const Facet* facet = nullptr;
  for (const auto& f : facets)
    if (f.ids == ids) facet = &f;
  if (!facet) throw Degenerate("contact set is not a support facet of the next shape");

  const RestPose laid = place_on_facet(p, next, *facet, 0.0, Vec2::Zero());
  std::vector<Vec2> pts;
  for (const auto& c : laid.contacts) pts.push_back(c.world_xy);
  const auto normal = distribute_normal_forces(pts, Vec2::Zero(), weight, p.design.b);

  SlipProblem pb;
  pb.heading = prev.heading;
  pb.weight = weight;
  pb.length_scale = p.design.b;
  pb.prev_com = prev.com_proj;
  pb.next_com_laid = Vec2::Zero();
  for (std::size_t j = 0; j < laid.contacts.size(); ++j) {
    const auto& c = laid.contacts[j];
    SlipContact sc;
    sc.vertex_id = c.vertex_id;
    sc.next_laid = c.world_xy;
    sc.normal = normal[j];
    sc.mu = friction.mu(c.psi_deg);
    sc.panels = c.adjacent_panels;
    for (const auto& pc : prev.contacts)
      if (pc.vertex_id == c.vertex_id) sc.prev_world = pc.world_xy;
    pb.contacts.push_back(sc);
  }
  return pb;
}

StepSolution solve_stick_slip(const CreasePattern& p, const RestPose& prev, const FoldState& next,
                              const FrictionModel& friction, double weight,
                              const StepOptions& options) {
  return solve_stick_slip(make_slip_problem(p, prev, next, friction, weight), options);
}

}  // namespace crawler
