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

#include "crawler/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>

#include "crawler/error.hpp"

namespace crawler {

void SweepGrid::validate() const {
  if (!(b > 0.0)) throw InvalidDesign("grid b must be positive");
  if (h_over_b.empty() || theta_deg.empty() || theta_v_deg.empty() || xv_over_b.empty() ||
      yv_over_b.empty())
    throw InvalidDesign("every grid list needs at least one value");
  if (valley_index < 1 || valley_index > 4) throw InvalidDesign("valley_index must lie in 1..4");
}

std::uint64_t SweepGrid::size() const {
  const std::uint64_t nt = theta_deg.size();
  return h_over_b.size() * nt * nt * nt * theta_v_deg.size() * xv_over_b.size() *
         yv_over_b.size();
}

VertexDesign SweepGrid::design(std::uint64_t index) const {
  if (index >= size()) throw std::out_of_range("grid index out of range");
  auto take = [&index](std::size_t n) {
    const std::size_t r = index % n;
    index /= n;
    return r;
  };
  const std::size_t iy = take(yv_over_b.size());
  const std::size_t ix = take(xv_over_b.size());
  const std::size_t iv = take(theta_v_deg.size());
  const std::size_t t3 = take(theta_deg.size());
  const std::size_t t2 = take(theta_deg.size());
  const std::size_t t1 = take(theta_deg.size());
  const std::size_t ih = take(h_over_b.size());

  VertexDesign d;
  d.b = b;
  d.h = h_over_b[ih] * b;
  d.theta = {theta_deg[t1], theta_deg[t2], theta_deg[t3]};
  d.theta_v = theta_v_deg[iv];
  const Eigen::Vector2d v = grid_vertex_position(xv_over_b[ix], yv_over_b[iy], b);
  d.xv = v.x();
  d.yv = v.y();
  d.valley_index = valley_index;
  return d;
}

Eigen::Vector2d grid_vertex_position(double xv_over_b, double yv_over_b, double b) {
  return {std::abs(xv_over_b) * b, std::abs(yv_over_b) * b};
}

void enumerate_grid(const SweepGrid& g,
                    const std::function<void(std::uint64_t, const VertexDesign&)>& visit) {
  g.validate();
  const std::uint64_t n = g.size();
  for (std::uint64_t i = 0; i < n; ++i) visit(i, g.design(i));
}

std::uint64_t design_id(const VertexDesign& d) {
  char buf[256];
  const int len = std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%d|%.17g",
                                d.b, d.h, d.theta[0], d.theta[1], d.theta[2], d.theta_v, d.xv,
                                d.yv, d.valley_index, d.weight);
  std::uint64_t h = 14695981039346656037ull;
  for (int i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(buf[i]);
    h *= 1099511628211ull;
  }
  return h;
}

std::string design_id_hex(std::uint64_t id) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
  return buf;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Infeasible: return "infeasible";
    case Outcome::NoFoldBranch: return "no_fold_branch";
    case Outcome::CannotStand: return "cannot_stand";
    case Outcome::FacetCollision: return "facet_collision";
    case Outcome::NoAnchor: return "no_anchor";
    case Outcome::Crawls: return "crawls";
    case Outcome::Error: return "error";
  }
  return "error";
}

Outcome parse_outcome(const std::string& s) {
  for (auto o : {Outcome::Infeasible, Outcome::NoFoldBranch, Outcome::CannotStand,
                 Outcome::FacetCollision, Outcome::NoAnchor, Outcome::Crawls, Outcome::Error})
    if (to_string(o) == s) return o;
  throw FormatError("unknown outcome '" + s + "'");
}

namespace {

std::string infeasibility(const FeasibilityFlags& f) {
  if (!f.developable) return "sector angles do not sum to 360 deg with all positive";
  if (!f.rigidly_foldable) return "a sector exceeds the sum of the other three";
  return "vertex lies outside the sheet";
}

Outcome outcome_of(FailureReason r) {
  switch (r) {
    case FailureReason::None: return Outcome::Crawls;
    case FailureReason::NoFoldBranch: return Outcome::NoFoldBranch;
    case FailureReason::CannotStand: return Outcome::CannotStand;
    case FailureReason::FacetCollision: return Outcome::FacetCollision;
    case FailureReason::NoAnchor: return Outcome::NoAnchor;
  }
  return Outcome::Error;
}


}  // namespace

DesignRecord evaluate_design(const VertexDesign& d, const ClassifyOptions& options) {
  DesignRecord r;
  r.design = d;
  r.id = design_id(d);
  r.flags = validate_design(d);
  if (!r.flags.all()) {
    r.outcome = Outcome::Infeasible;
    r.message = infeasibility(r.flags);
    return r;
  }
  try {
    const ModeReport m = classify_modes(d, options);
    r.n_change = m.n_change_total;
    r.outcome = outcome_of(m.failure);
    r.message = m.failure_message;
    if (r.outcome == Outcome::Crawls && m.modes.empty()) {
      r.outcome = Outcome::Error;
      r.message = "deflation produced no mode";
    }
    if (r.outcome == Outcome::Crawls) {
      r.category = m.category;
      r.modes = m.modes;
      r.kappa_total = m.kappa_total;
      r.length_total = m.length_total;
      r.length_min = m.length_min();
    }
  } catch (const InvalidDesign& e) {
    r.outcome = Outcome::Infeasible;
    r.message = e.what();
  } catch (const DegenerateCrease& e) {
    r.outcome = Outcome::Infeasible;
    r.message = e.what();
  } catch (const std::exception& e) {
    r.outcome = Outcome::Error;
    r.message = e.what();
  }
  return r;
}

nlohmann::json record_to_json(const DesignRecord& r) {
  nlohmann::json j;
  j["schema_version"] = kRecordSchemaVersion;
  j["index"] = r.index;
  j["design_id"] = design_id_hex(r.id);
  j["design"] = r.design;
  j["flags"] = {{"developable", r.flags.developable},
                {"rigidly_foldable", r.flags.rigidly_foldable},
                {"vertex_interior", r.flags.vertex_interior}};
  j["outcome"] = to_string(r.outcome);
  if (!r.message.empty()) j["message"] = r.message;
  j["n_change"] = r.n_change;
  j["category"] = to_string(r.category);
  j["n_modes"] = r.modes.size();
  j["modes"] = r.modes;
  j["kappa_total_rad"] = r.kappa_total;
  j["length_total_mm"] = r.length_total;
  j["length_min_mm"] = r.length_min;
  return j;
}

DesignRecord record_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kRecordSchemaVersion)
      throw SchemaMismatch("record schema_version " + std::to_string(version) + ", expected " +
                           std::to_string(kRecordSchemaVersion));
    DesignRecord r;
    r.index = j.at("index").get<std::uint64_t>();
    r.id = std::stoull(j.at("design_id").get<std::string>(), nullptr, 16);
    r.design = j.at("design").get<VertexDesign>();
    const auto& f = j.at("flags");
    r.flags.developable = f.at("developable").get<bool>();
    r.flags.rigidly_foldable = f.at("rigidly_foldable").get<bool>();
    r.flags.vertex_interior = f.at("vertex_interior").get<bool>();
    r.flags.theta4 = r.design.theta4();
    r.outcome = parse_outcome(j.at("outcome").get<std::string>());
    r.message = j.value("message", "");
    r.n_change = j.at("n_change").get<int>();
    r.category = parse_mode_category(j.at("category").get<std::string>());
    for (const auto& m : j.at("modes")) r.modes.push_back(m.get<Mode>());
    r.kappa_total = j.at("kappa_total_rad").get<double>();
    r.length_total = j.at("length_total_mm").get<double>();
    r.length_min = j.at("length_min_mm").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw FormatError("malformed design_id");
  }
}

std::string record_line(const DesignRecord& r) { return record_to_json(r).dump() + '\n'; }

std::vector<DesignRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<DesignRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw FormatError(path.string() + ":" + std::to_string(n) + ": not a JSON record");
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Taxonomy

std::uint64_t Taxonomy::count(ModeCategory c) const {
  const auto it = categories.find(c);
  return it == categories.end() ? 0 : it->second;
}

double Taxonomy::fraction(ModeCategory c) const {
  return population ? static_cast<double>(count(c)) / static_cast<double>(population) : 0.0;
}

double Taxonomy::single_mode_fraction() const {
  return fraction(ModeCategory::SingleStraight) + fraction(ModeCategory::SingleTurn);
}

double Taxonomy::two_mode_fraction() const {
  return fraction(ModeCategory::StraightAndTurn) + fraction(ModeCategory::LeftAndRight) +
         fraction(ModeCategory::TwoStraight);
}

double Taxonomy::three_mode_fraction() const { return fraction(ModeCategory::ThreePlus); }

Taxonomy aggregate(const std::vector<DesignRecord>& records) {
  Taxonomy t;
  for (const auto& r : records) {
    ++t.total;
    switch (r.outcome) {
      case Outcome::Infeasible: ++t.infeasible; break;
      case Outcome::NoFoldBranch: ++t.no_fold_branch; break;
      case Outcome::CannotStand: ++t.cannot_stand; break;
      case Outcome::FacetCollision: ++t.facet_collision; break;
      case Outcome::NoAnchor: ++t.no_anchor; break;
      case Outcome::Error: ++t.errors; break;
      case Outcome::Crawls:
        ++t.crawls;
        ++t.by_n_change[r.n_change][r.category];
        if (r.many_changes()) ++t.many_changes;
        if (r.n_change < 2) {
          ++t.population;
          ++t.categories[r.category];
        }
        break;
    }
  }
  return t;
}

namespace {

constexpr ModeCategory kCategories[] = {
    ModeCategory::SingleStraight, ModeCategory::SingleTurn,  ModeCategory::StraightAndTurn,
    ModeCategory::LeftAndRight,   ModeCategory::TwoStraight, ModeCategory::ThreePlus};

}  // namespace

void to_json(nlohmann::json& j, const Taxonomy& t) {
  nlohmann::json cats = nlohmann::json::object();
  for (auto c : kCategories) cats[to_string(c)] = t.count(c);
  nlohmann::json by = nlohmann::json::object();
  for (const auto& [n, m] : t.by_n_change) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [c, k] : m) row[to_string(c)] = k;
    by[std::to_string(n)] = row;
  }
  j = nlohmann::json{{"schema_version", kRecordSchemaVersion},
                     {"total", t.total},
                     {"infeasible", t.infeasible},
                     {"no_fold_branch", t.no_fold_branch},
                     {"foldable", t.foldable()},
                     {"fails", {{"cannot_stand", t.cannot_stand},
                                {"facet_collision", t.facet_collision},
                                {"no_anchor", t.no_anchor}}},
                     {"errors", t.errors},
                     {"crawls", t.crawls},
                     {"many_changes", t.many_changes},
                     {"population", t.population},
                     {"categories", cats},
                     {"by_n_change", by},
                     {"fractions", {{"single_mode", t.single_mode_fraction()},
                                    {"two_mode", t.two_mode_fraction()},
                                    {"three_mode", t.three_mode_fraction()}}}};
}

void from_json(const nlohmann::json& j, Taxonomy& t) {
  try {
    if (j.at("schema_version").get<int>() != kRecordSchemaVersion)
      throw SchemaMismatch("taxonomy schema_version mismatch");
    t = Taxonomy{};
    t.total = j.at("total").get<std::uint64_t>();
    t.infeasible = j.at("infeasible").get<std::uint64_t>();
    t.no_fold_branch = j.at("no_fold_branch").get<std::uint64_t>();
    const auto& f = j.at("fails");
    t.cannot_stand = f.at("cannot_stand").get<std::uint64_t>();
    t.facet_collision = f.at("facet_collision").get<std::uint64_t>();
    t.no_anchor = f.at("no_anchor").get<std::uint64_t>();
    t.errors = j.at("errors").get<std::uint64_t>();
    t.crawls = j.at("crawls").get<std::uint64_t>();
    t.many_changes = j.at("many_changes").get<std::uint64_t>();
    t.population = j.at("population").get<std::uint64_t>();
    for (const auto& [name, k] : j.at("categories").items())
      t.categories[parse_mode_category(name)] = k.get<std::uint64_t>();
    for (const auto& [n, row] : j.at("by_n_change").items())
      for (const auto& [name, k] : row.items())
        t.by_n_change[std::stoi(n)][parse_mode_category(name)] = k.get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed taxonomy: ") + e.what());
  }
}

std::string format_taxonomy(const Taxonomy& t) {
  std::ostringstream os;
  char buf[160];
  auto row = [&](const char* name, std::uint64_t n, std::uint64_t of) {
    const double pct = of ? 100.0 * static_cast<double>(n) / static_cast<double>(of) : 0.0;
    std::snprintf(buf, sizeof buf, "  %-22s %10llu  %6.2f%%\n", name,
                  static_cast<unsigned long long>(n), pct);
    os << buf;
  };
  os << "designs " << t.total << '\n';
  row("infeasible", t.infeasible, t.total);
  row("no fold branch", t.no_fold_branch, t.total);
  row("foldable", t.foldable(), t.total);
  os << "of foldable\n";
  row("cannot stand", t.cannot_stand, t.foldable());
  row("facet collision", t.facet_collision, t.foldable());
  row("no anchor", t.no_anchor, t.foldable());
  row("error", t.errors, t.foldable());
  row("crawls", t.crawls, t.foldable());
  row("N_change > 2", t.many_changes, t.crawls);
  os << "of " << t.population << " crawling with N_change < 2\n";
  for (auto c : kCategories) row(to_string(c).c_str(), t.count(c), t.population);
  std::snprintf(buf, sizeof buf, "  single %.2f%%  two %.2f%%  three %.2f%%\n",
                100.0 * t.single_mode_fraction(), 100.0 * t.two_mode_fraction(),
                100.0 * t.three_mode_fraction());
  os << buf;
  return os.str();
}

void write_summary_csv(const std::vector<DesignRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "index,design_id,outcome,n_change,category,n_modes,length_total_mm,kappa_total_rad,"
         "length_min_mm,alpha_spread_deg\n";
  char buf[96];
  for (const auto& r : records) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < r.modes.size(); ++i) {
      lo = i ? std::min(lo, r.modes[i].alpha_deg) : r.modes[i].alpha_deg;
      hi = i ? std::max(hi, r.modes[i].alpha_deg) : r.modes[i].alpha_deg;
    }
    out << r.index << ',' << design_id_hex(r.id) << ',' << to_string(r.outcome) << ','
        << r.n_change << ',' << to_string(r.category) << ',' << r.modes.size();
    std::snprintf(buf, sizeof buf, ",%.10g,%.10g,%.10g,%.10g\n", r.length_total, r.kappa_total,
                  r.length_min, hi - lo);
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Config and plan

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed config " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  auto resolve = [&base](const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() || base.empty() ? q : base / q;
  };
  SweepConfig c;
  try {
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      c.grid.b = g.value("b_mm", c.grid.b);
      c.grid.h_over_b = g.value("h_over_b", c.grid.h_over_b);
      c.grid.theta_deg = g.value("theta_deg", c.grid.theta_deg);
      c.grid.theta_v_deg = g.value("theta_v_deg", c.grid.theta_v_deg);
      c.grid.xv_over_b = g.value("xv_over_b", c.grid.xv_over_b);
      c.grid.yv_over_b = g.value("yv_over_b", c.grid.yv_over_b);
      c.grid.valley_index = g.value("valley_index", c.grid.valley_index);
    }
    if (j.contains("friction_csv"))
      c.classify.gait.friction = FrictionModel::load_csv(resolve(j.at("friction_csv").get<std::string>()));
    else if (j.contains("mu"))
      c.classify.gait.friction = FrictionModel::constant(j.at("mu").get<double>());
    c.classify.gait.weight = j.value("weight", 1.0);
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      c.classify.beta_min = s.value("beta_min_deg", c.classify.beta_min);
      c.classify.beta_max = s.value("beta_max_deg", c.classify.beta_max);
      c.classify.dbeta = s.value("dbeta_deg", c.classify.dbeta);
    }
    if (j.contains("out")) c.out = resolve(j.at("out").get<std::string>());
    c.workers = j.value("workers", c.workers);
    if (j.contains("sample")) c.sample = j.at("sample").get<std::uint64_t>();
    c.seed = j.value("seed", c.seed);
    c.resume = j.value("resume", c.resume);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad config " + path.string() + ": " + e.what());
  }
  c.grid.validate();
  if (c.workers < 1) throw FormatError("workers must be at least 1");
  return c;
}

std::vector<std::uint64_t> sweep_indices(const SweepGrid& g, std::optional<std::uint64_t> sample,
                                         std::uint64_t seed) {
  std::vector<std::uint64_t> all(g.size());
  std::iota(all.begin(), all.end(), std::uint64_t{0});
  if (!sample || *sample >= all.size()) return all;
  std::vector<std::uint64_t> out;
  out.reserve(*sample);
  std::mt19937_64 rng(seed);
  // Selection sampling over a forward range keeps the indices ascending.
  std::sample(all.begin(), all.end(), std::back_inserter(out), *sample, rng);
  return out;
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct Plan {
  std::vector<std::uint64_t> indices;
  std::size_t done = 0;  // records already on disk
};

// Validates existing output against the plan and drops a torn last line.
std::size_t resume_point(const SweepConfig& c, const SweepGrid& g,
                         const std::vector<std::uint64_t>& indices) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(c.out, ec)) return 0;
  std::string text;
  {
    std::ifstream in(c.out, std::ios::binary);
    if (!in) throw IoError("cannot read " + c.out.string());
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  const std::size_t last = text.rfind('\n');
  const std::size_t keep = last == std::string::npos ? 0 : last + 1;
  if (keep != text.size()) {
    fs::resize_file(c.out, keep, ec);
    if (ec) throw IoError("cannot truncate " + c.out.string() + ": " + ec.message());
    text.resize(keep);
  }
  std::size_t done = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (done >= indices.size()) throw FormatError(c.out.string() + " holds more records than planned");
    DesignRecord r;
    try {
      r = record_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception&) {
      throw FormatError(c.out.string() + ": unreadable record " + std::to_string(done + 1));
    }
    if (r.index != indices[done] || r.id != design_id(g.design(indices[done])))
      throw FormatError(c.out.string() + " was written by a different sweep plan");
    ++done;
  }
  return done;
}

Plan make_plan(const SweepConfig& c) {
  c.grid.validate();
  Plan p;
  p.indices = sweep_indices(c.grid, c.sample, c.seed);
  if (c.resume) p.done = resume_point(c, c.grid, p.indices);
  return p;
}

std::ofstream open_output(const SweepConfig& c) {
  if (!c.out.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(c.out.parent_path(), ec);
  }
  std::ofstream out(c.out, c.resume ? std::ios::binary | std::ios::app
                                    : std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + c.out.string());
  return out;
}

std::string evaluate_line(const SweepConfig& c, std::uint64_t index) {
  DesignRecord r = evaluate_design(c.grid.design(index), c.classify);
  r.index = index;
  return record_line(r);
}

}  // namespace

SweepStats run_sweep(const SweepConfig& config, const SweepProgress& progress) {
  const Plan plan = make_plan(config);
  std::ofstream out = open_output(config);
  SweepStats stats;
  stats.planned = plan.indices.size();
  stats.resumed = plan.done;

  const int workers = std::max(1, config.workers);
  // Batches bound the reorder buffer and set the checkpoint granularity.
  const std::size_t batch = static_cast<std::size_t>(32 * workers);
  std::vector<std::string> lines;
  for (std::size_t lo = plan.done; lo < plan.indices.size(); lo += batch) {
    const std::size_t hi = std::min(plan.indices.size(), lo + batch);
    lines.assign(hi - lo, std::string());
    const auto count = static_cast<std::int64_t>(hi - lo);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::int64_t k = 0; k < count; ++k)
      lines[static_cast<std::size_t>(k)] =
          evaluate_line(config, plan.indices[lo + static_cast<std::size_t>(k)]);
    for (const auto& l : lines) out << l;
    out.flush();
    if (!out) throw IoError("write failed for " + config.out.string());
    stats.evaluated += hi - lo;
    if (progress) progress(hi, stats.planned);
  }
  return stats;
}

SweepStats run_sweep_serial(const SweepConfig& config, const SweepProgress& progress) {
  const Plan plan = make_plan(config);
  std::ofstream out = open_output(config);
  SweepStats stats;
  stats.planned = plan.indices.size();
  stats.resumed = plan.done;
  for (std::size_t i = plan.done; i < plan.indices.size(); ++i) {
    out << evaluate_line(config, plan.indices[i]);
    out.flush();
    if (!out) throw IoError("write failed for " + config.out.string());
    ++stats.evaluated;
    if (progress) progress(i + 1, stats.planned);
  }
  return stats;
}

}  // namespace crawler
