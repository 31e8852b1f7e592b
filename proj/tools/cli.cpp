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

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crawler/error.hpp"
#include "crawler/gait.hpp"
#include "crawler/plot.hpp"
#include "crawler/sweep.hpp"

namespace crawler::cli {

namespace {

namespace fs = std::filesystem;

struct SimulateArgs {
  std::string design;
  double beta_min = 120.0;
  double beta_max = 180.0;
  double dbeta = 0.5;
  int cycles = 1;
  std::optional<double> mu;
  std::string friction;
  std::string out = "out";
  bool strict = false;
};

struct SweepArgs {
  std::string config;
  std::optional<std::uint64_t> sample;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out;
  bool resume = false;
  bool serial = false;
};

struct AggregateArgs {
  std::string in;
  std::string out;
};

struct PlotArgs {
  std::string kind;
  std::string in;
  std::string out;
};

struct Parser {
  CLI::App app{"Simulator and design-space explorer for single-input origami crawlers", "crawler"};
  SimulateArgs sim;
  SweepArgs sweep;
  AggregateArgs agg;
  PlotArgs plot;
  CLI::App* simulate_cmd = nullptr;
  CLI::App* sweep_cmd = nullptr;
  CLI::App* aggregate_cmd = nullptr;
  CLI::App* plot_cmd = nullptr;

  Parser() {
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Print help for every subcommand");

    simulate_cmd = app.add_subcommand("simulate", "Simulate actuation cycles of one design");
    simulate_cmd->add_option("--design", sim.design, "Design JSON file")->required();
    simulate_cmd->add_option("--beta-min", sim.beta_min, "Smallest fold angle (deg)")
        ->capture_default_str();
    simulate_cmd->add_option("--beta-max", sim.beta_max, "Largest fold angle (deg)")
        ->capture_default_str();
    simulate_cmd->add_option("--dbeta", sim.dbeta, "Fold angle step (deg)")->capture_default_str();
    simulate_cmd->add_option("--cycles", sim.cycles, "Number of actuation cycles")
        ->capture_default_str();
    auto* mu = simulate_cmd->add_option("--mu", sim.mu, "Constant static friction coefficient (default 0.4)");
    auto* friction = simulate_cmd->add_option("--friction", sim.friction,
                                              "CSV table psi_deg,mu_s of friction against face angle");
    mu->excludes(friction);
    simulate_cmd->add_option("--out", sim.out, "Output directory")->capture_default_str();
    simulate_cmd->add_flag("--strict", sim.strict,
                           "Stop at the first step where no contact sticks");

    sweep_cmd = app.add_subcommand("sweep", "Evaluate a grid of designs");
    sweep_cmd->add_option("--config", sweep.config, "Sweep config JSON")->required();
    sweep_cmd->add_option("--sample", sweep.sample, "Evaluate a seeded random subset of this size");
    sweep_cmd->add_option("--seed", sweep.seed, "Seed for --sample (default 7)");
    sweep_cmd->add_option("--workers", sweep.workers, "Worker threads (overrides the config)");
    sweep_cmd->add_option("--out", sweep.out, "Records file (overrides the config)");
    sweep_cmd->add_flag("--resume", sweep.resume, "Continue an interrupted run");
    sweep_cmd->add_flag("--serial", sweep.serial, "Use the single-threaded reference path");

    aggregate_cmd = app.add_subcommand("aggregate", "Summarise sweep records");
    aggregate_cmd->add_option("--in", agg.in, "Records file (JSON Lines)")->required();
    aggregate_cmd->add_option("--out", agg.out, "Write the taxonomy as JSON");

    plot_cmd = app.add_subcommand("plot", "Render a chart as standalone SVG");
    std::string kinds;
    for (const auto& k : plot_kind_names()) kinds += (kinds.empty() ? "" : ", ") + k;
    plot_cmd->add_option("--kind", plot.kind, "One of: " + kinds)->required();
    plot_cmd->add_option("--in", plot.in, "Input file")->required();
    plot_cmd->add_option("--out", plot.out, "Output SVG")->required();
  }
};

std::string format_fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string summary_line(const std::string& name, const VertexDesign& d, const Trajectory& t,
                         const ModeReport& r) {
  std::string s = name + ": ";
  if (!r.crawls()) {
    s += "fails " + to_string(r.failure);
  } else {
    s += to_string(r.category) + " |";
    for (const auto& m : r.modes)
      s += " " + to_string(m.kind) + "[" + format_fixed(m.beta_lo, 1) + "," + format_fixed(m.beta_hi, 1) + "]";
  }
  s += " | L/b " + format_fixed(r.length_total / d.b, 3);
  s += " | kappa_T " + format_fixed(r.kappa_total, 3) + " rad";
  s += " | N_change " + std::to_string(r.n_change_total);
  if (!t.samples.empty())
    s += " | net " + format_fixed((t.samples.back().com_xy - t.samples.front().com_xy).norm(), 2) + " mm";
  return s;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  VertexDesign d;
  GaitOptions options;
  ActuationSchedule schedule;
  try {
    d = load_design(a.design);
    if (a.mu) options.friction = FrictionModel::constant(*a.mu);
    if (!a.friction.empty()) options.friction = FrictionModel::load_csv(a.friction);
    schedule.beta_min = a.beta_min;
    schedule.beta_max = a.beta_max;
    schedule.dbeta = a.dbeta;
    schedule.cycles = a.cycles;
    schedule.validate();
    if (a.cycles < 1) throw InvalidDesign("--cycles must be at least 1");
  } catch (const CrawlerError& e) {
    err << "error: " << e.what() << '\n';
    return kDesignError;
  }
  const FeasibilityFlags flags = validate_design(d);
  if (!flags.all()) {
    err << "error: infeasible design: developable=" << flags.developable
        << " rigidly_foldable=" << flags.rigidly_foldable
        << " vertex_interior=" << flags.vertex_interior << '\n';
    return kDesignError;
  }
  options.weight = d.weight;
  options.allow_unanchored = !a.strict;

  Trajectory t;
  try {
    t = run_cycles(d, schedule, options);
  } catch (const CrawlerError& e) {
    err << "error: " << e.what() << '\n';
    return kDesignError;
  }
  const ModeReport r = classify_trajectory(t);
  try {
    fs::create_directories(a.out);
    write_trajectory_csv(t, fs::path(a.out) / "trajectory.csv");
    write_forces_csv(t, fs::path(a.out) / "forces.csv");
    write_text(fs::path(a.out) / "modes.json", nlohmann::json(r).dump(2) + "\n");
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  out << summary_line(fs::path(a.design).stem().string(), d, t, r) << '\n';
  if (!t.ok()) {
    err << "error: " << to_string(t.failure) << ": " << t.failure_message << '\n';
    return kDesignError;
  }
  return kOk;
}

fs::path sibling(const fs::path& records, const std::string& suffix) {
  fs::path p = records;
  p.replace_extension(suffix);
  return p;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SweepConfig c;
  try {
    c = load_sweep_config(a.config);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const CrawlerError& e) {
    err << "error: " << e.what() << '\n';
    return kDesignError;
  }
  if (a.sample) c.sample = a.sample;
  if (a.seed) c.seed = *a.seed;
  if (a.workers) c.workers = std::max(1, *a.workers);
  if (!a.out.empty()) c.out = a.out;
  if (a.resume) c.resume = true;
  try {
    const SweepStats s = a.serial ? run_sweep_serial(c) : run_sweep(c);
    const auto records = read_records(c.out);
    const Taxonomy t = aggregate(records);
    write_text(sibling(c.out, ".taxonomy.json"), nlohmann::json(t).dump(2) + "\n");
    write_summary_csv(records, sibling(c.out, ".summary.csv"));
    out << "planned " << s.planned << ", resumed " << s.resumed << ", evaluated " << s.evaluated
        << '\n'
        << format_taxonomy(t);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kDesignError;
  } catch (const SchemaMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kDesignError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

int cmd_aggregate(const AggregateArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const Taxonomy t = aggregate(read_records(a.in));
    if (!a.out.empty()) write_text(a.out, nlohmann::json(t).dump(2) + "\n");
    out << format_taxonomy(t);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const CrawlerError& e) {
    err << "error: " << e.what() << '\n';
    return kDesignError;
  }
  return kOk;
}

int cmd_plot(const PlotArgs& a, std::ostream& err) {
  PlotKind kind;
  try {
    kind = parse_plot_kind(a.kind);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kPlotInput;
  }
  if (fs::path(a.out).extension() != ".svg") {
    err << "error: --out must end in .svg\n";
    return kPlotInput;
  }
  try {
    render_plot(kind, a.in, a.out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kPlotInput;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parser p;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    p.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << p.app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << p.app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return p.plot_cmd->parsed() ? kPlotInput : kDesignError;
  }
  if (p.simulate_cmd->parsed()) return cmd_simulate(p.sim, out, err);
  if (p.sweep_cmd->parsed()) return cmd_sweep(p.sweep, out, err);
  if (p.aggregate_cmd->parsed()) return cmd_aggregate(p.agg, out, err);
  return cmd_plot(p.plot, err);
}

std::string help_text(const std::string& subcommand) {
  std::ostringstream out, err;
  if (subcommand.empty()) run({"--help"}, out, err);
  else run({subcommand, "--help"}, out, err);
  return out.str();
}

}  // namespace crawler::cli
