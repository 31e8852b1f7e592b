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

#include "crawler/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "crawler/error.hpp"
#include "crawler/svg.hpp"

namespace crawler {

namespace {

constexpr PlotKind kKinds[] = {PlotKind::Trajectory,       PlotKind::FrictionVsBeta,
                               PlotKind::TaxonomyBars,     PlotKind::ScatterLVsKappaT,
                               PlotKind::ScatterAlphaVsLmin, PlotKind::ScatterLminVsLT};

const char* kind_color(ModeKind k) {
  switch (k) {
    case ModeKind::Straight: return "#1f77b4";
    case ModeKind::Left: return "#2ca02c";
    case ModeKind::Right: return "#d62728";
  }
  return "#333333";
}

const char* category_color(ModeCategory c) {
  switch (c) {
    case ModeCategory::SingleStraight: return "#1f77b4";
    case ModeCategory::SingleTurn: return "#2ca02c";
    case ModeCategory::StraightAndTurn: return "#ff7f0e";
    case ModeCategory::LeftAndRight: return "#9467bd";
    case ModeCategory::TwoStraight: return "#8c564b";
    case ModeCategory::ThreePlus: return "#d62728";
    case ModeCategory::None: break;
  }
  return "#7f7f7f";
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

int parse_vertex(const std::string& label) {
  if (label.size() < 2 || label[0] != 'v') throw FormatError("bad vertex label '" + label + "'");
  const int k = std::stoi(label.substr(1));
  if (k < 1 || k > kNumVertices) throw FormatError("bad vertex label '" + label + "'");
  return k - 1;
}

double wrap_deg(double a) {
  a = std::fmod(a + 180.0, 360.0);
  if (a < 0) a += 360.0;
  return a - 180.0;
}

}  // namespace

std::string to_string(PlotKind k) {
  switch (k) {
    case PlotKind::Trajectory: return "trajectory";
    case PlotKind::FrictionVsBeta: return "friction_vs_beta";
    case PlotKind::TaxonomyBars: return "taxonomy_bars";
    case PlotKind::ScatterLVsKappaT: return "scatter_L_vs_kappaT";
    case PlotKind::ScatterAlphaVsLmin: return "scatter_alpha_vs_Lmin";
    case PlotKind::ScatterLminVsLT: return "scatter_Lmin_vs_LT";
  }
  return "trajectory";
}

PlotKind parse_plot_kind(const std::string& s) {
  for (auto k : kKinds)
    if (to_string(k) == s) return k;
  throw FormatError("unknown plot kind '" + s + "'");
}

std::vector<std::string> plot_kind_names() {
  std::vector<std::string> out;
  for (auto k : kKinds) out.push_back(to_string(k));
  return out;
}

std::vector<ForceRow> read_forces_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "step,beta_deg,vertex,state,normal,capacity,ft_x,ft_y")
    throw FormatError("not a forces file: " + path.string());
  std::vector<ForceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 8) throw FormatError("malformed forces row: " + line);
    try {
      ForceRow r;
      r.step = std::stoi(cols[0]);
      r.beta_deg = std::stod(cols[1]);
      r.vertex_id = parse_vertex(cols[2]);
      if (cols[3] != "stick" && cols[3] != "slip") throw FormatError("bad contact state " + cols[3]);
      r.state = cols[3] == "stick" ? ContactState::Stick : ContactState::Slip;
      r.normal = std::stod(cols[4]);
      r.capacity = std::stod(cols[5]);
      r.tangential = {std::stod(cols[6]), std::stod(cols[7])};
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw FormatError("malformed forces row: " + line);
    }
  }
  return rows;
}

std::string trajectory_svg(const Trajectory& t, const std::vector<Mode>& modes) {
  SvgChart chart("Centre of mass trajectory", "x (mm)", "y (mm)");
  chart.set_equal_aspect(true);
  auto color_of = [&](const TrajectorySample& s) -> std::string {
    if (s.phase == Phase::Inflation) return "#bbbbbb";
    for (const auto& m : modes)
      if (s.beta_deg >= m.beta_lo - 1e-9 && s.beta_deg <= m.beta_hi + 1e-9) return kind_color(m.kind);
    return "#333333";
  };
  // Consecutive segments of one colour become one polyline.
  std::vector<Eigen::Vector2d> run;
  std::string run_color;
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    const std::string c = color_of(t.samples[i]);
    if (c != run_color) {
      chart.polyline(run, run_color, 2.0);
      run = {t.samples[i - 1].com_xy};
      run_color = c;
    }
    run.push_back(t.samples[i].com_xy);
  }
  chart.polyline(run, run_color, 2.0);
  if (!t.samples.empty()) chart.marker(t.samples.front().com_xy, "#000000", MarkerShape::Square, 4);
  for (const auto& s : t.samples)
    if (s.event)
      chart.marker(s.com_xy, *s.event == EventKind::TipOver ? "#000000" : "#ff7f0e",
                   *s.event == EventKind::TipOver ? MarkerShape::Triangle : MarkerShape::Circle, 4);

  std::set<ModeKind> kinds;
  for (const auto& m : modes) kinds.insert(m.kind);
  for (auto k : kinds) chart.legend(to_string(k), kind_color(k));
  if (!t.samples.empty()) {
    chart.legend("inflation", "#bbbbbb");
    chart.legend("contact change", "#ff7f0e");
  }
  return chart.render();
}

std::string friction_svg(const std::vector<ForceRow>& rows) {
  SvgChart chart("Static friction capacity at the contacts", "beta (deg)", "F_s / W");
  std::map<int, std::vector<const ForceRow*>> by_vertex;
  for (const auto& r : rows) by_vertex[r.vertex_id].push_back(&r);
  std::size_t c = 0;
  for (const auto& [v, list] : by_vertex) {
    const std::string color = kPalette[c++ % std::size(kPalette)];
    std::vector<Eigen::Vector2d> line;
    for (std::size_t i = 0; i < list.size(); ++i) {
      // A gap in steps (another contact set or another cycle) breaks the line.
      if (i > 0 && list[i]->step != list[i - 1]->step + 1) {
        chart.polyline(line, color);
        line.clear();
      }
      line.emplace_back(list[i]->beta_deg, list[i]->capacity);
      if (list[i]->state == ContactState::Stick)
        chart.marker({list[i]->beta_deg, list[i]->capacity}, color, MarkerShape::Circle, 3);
    }
    chart.polyline(line, color);
    chart.legend(vertex_label(v), color);
  }
  return chart.render();
}

std::string taxonomy_svg(const Taxonomy& t) {
  SvgChart chart("Crawling modes (N_change < 2)", "", "share of designs (%)");
  const std::pair<ModeCategory, const char*> cats[] = {
      {ModeCategory::SingleStraight, "straight"}, {ModeCategory::SingleTurn, "turn"},
      {ModeCategory::StraightAndTurn, "straight+turn"}, {ModeCategory::LeftAndRight, "left+right"},
      {ModeCategory::TwoStraight, "two straight"}, {ModeCategory::ThreePlus, "three modes"}};
  std::vector<std::pair<double, std::string>> labels;
  const char* shades[] = {"#4c72b0", "#dd8452"};
  const double total = static_cast<double>(t.population);
  double top = 0.0;
  for (std::size_t i = 0; i < std::size(cats); ++i) {
    const double x = static_cast<double>(i);
    labels.emplace_back(x, cats[i].second);
    double y = 0.0;
    for (int n = 0; n < 2 && total > 0.0; ++n) {
      const auto row = t.by_n_change.find(n);
      if (row == t.by_n_change.end()) continue;
      const auto cell = row->second.find(cats[i].first);
      if (cell == row->second.end()) continue;
      const double h = 100.0 * static_cast<double>(cell->second) / total;
      chart.bar(x - 0.35, x + 0.35, y, y + h, shades[n]);
      y += h;
    }
    top = std::max(top, y);
  }
  chart.set_x_labels(std::move(labels));
  chart.set_y_range(0.0, top > 0.0 ? std::ceil(top / 10.0) * 10.0 : 100.0);
  chart.legend("N_change = 0", shades[0]);
  chart.legend("N_change = 1", shades[1]);
  return chart.render();
}

std::string scatter_svg(PlotKind kind, const std::vector<DesignRecord>& records) {
  std::string title, xl, yl;
  switch (kind) {
    case PlotKind::ScatterLVsKappaT:
      title = "Net step versus total curvature", xl = "kappa_T (rad)", yl = "L / b";
      break;
    case PlotKind::ScatterAlphaVsLmin:
      title = "Direction change versus shortest mode", xl = "L_min / b", yl = "alpha spread (deg)";
      break;
    case PlotKind::ScatterLminVsLT:
      title = "Shortest mode versus total travel", xl = "L_T / b", yl = "L_min / b";
      break;
    default:
      throw FormatError(to_string(kind) + " is not a scatter plot");
  }
  SvgChart chart(title, xl, yl);
  std::set<ModeCategory> seen;
  for (const auto& r : records) {
    if (r.outcome != Outcome::Crawls || r.n_change >= 2) continue;
    const double b = r.design.b;
    Eigen::Vector2d p;
    if (kind == PlotKind::ScatterLVsKappaT) {
      p = {r.kappa_total, r.length_total / b};
    } else {
      if (r.modes.size() < 2) continue;
      if (kind == PlotKind::ScatterAlphaVsLmin) {
        double spread = 0.0;
        for (std::size_t i = 0; i < r.modes.size(); ++i)
          for (std::size_t j = i + 1; j < r.modes.size(); ++j)
            spread = std::max(spread, std::abs(wrap_deg(r.modes[i].alpha_deg - r.modes[j].alpha_deg)));
        p = {r.length_min / b, spread};
      } else {
        p = {r.length_total / b, r.length_min / b};
      }
    }
    chart.marker(p, category_color(r.category), MarkerShape::Circle, 2.5);
    seen.insert(r.category);
  }
  for (auto c : seen) chart.legend(to_string(c), category_color(c));
  return chart.render();
}

void render_plot(PlotKind kind, const std::filesystem::path& in, const std::filesystem::path& out) {
  std::string svg;
  auto records = [&in] {
    try {
      return read_records(in);
    } catch (const IoError& e) {
      throw FormatError(e.what());
    } catch (const SchemaMismatch& e) {
      throw FormatError(e.what());
    }
  };
  switch (kind) {
    case PlotKind::Trajectory: {
      const Trajectory t = read_trajectory_csv(in);
      std::vector<Mode> modes;
      const auto modes_path = in.parent_path() / "modes.json";
      if (std::filesystem::exists(modes_path)) {
        std::ifstream m(modes_path);
        try {
          const auto j = nlohmann::json::parse(m);
          if (j.contains("modes")) modes = j.at("modes").get<std::vector<Mode>>();
        } catch (const nlohmann::json::exception& e) {
          throw FormatError("malformed " + modes_path.string() + ": " + e.what());
        }
      }
      svg = trajectory_svg(t, modes);
      break;
    }
    case PlotKind::FrictionVsBeta:
      svg = friction_svg(read_forces_csv(in));
      break;
    case PlotKind::TaxonomyBars: {
      if (in.extension() == ".jsonl") {
        svg = taxonomy_svg(aggregate(records()));
        break;
      }
      std::ifstream f(in);
      if (!f) throw FormatError("cannot open " + in.string());
      Taxonomy t;
      try {
        t = nlohmann::json::parse(f).get<Taxonomy>();
      } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed taxonomy " + in.string() + ": " + e.what());
      } catch (const SchemaMismatch& e) {
        throw FormatError(e.what());
      }
      svg = taxonomy_svg(t);
      break;
    }
    case PlotKind::ScatterLVsKappaT:
    case PlotKind::ScatterAlphaVsLmin:
    case PlotKind::ScatterLminVsLT:
      svg = scatter_svg(kind, records());
      break;
  }
  std::ofstream o(out, std::ios::binary);
  if (!o) throw IoError("cannot write " + out.string());
  o << svg;
  if (!o) throw IoError("write failed for " + out.string());
}

}  // namespace crawler
