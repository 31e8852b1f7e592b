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
#include <sstream>

#include "cli.hpp"
#include "crawler/sweep.hpp"
#include "support.hpp"

using namespace crawler;
using namespace crawler::testing;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  std::ifstream in(source_dir() / "tests" / "golden" / name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fixture_path(const std::string& roman) { return fixture(roman).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help text matches the golden files") {
  CHECK(cli::help_text() == golden("help.txt"));
  for (const std::string sub : {"simulate", "sweep", "aggregate", "plot"}) {
    CAPTURE(sub);
    CHECK(cli::help_text(sub) == golden("help_" + sub + ".txt"));
    const auto r = invoke({sub, "--help"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out == golden("help_" + sub + ".txt"));
  }
  CHECK(invoke({"--help-all"}).out.find("--resume") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == cli::kDesignError);
  CHECK(invoke({"fly"}).code == cli::kDesignError);
  CHECK(invoke({"simulate"}).code == cli::kDesignError);
  CHECK(invoke({"simulate", "--design", "/nonexistent.json"}).code == cli::kDesignError);
  CHECK(invoke({"simulate", "--design", fixture_path("III"), "--beta-min", "100"}).code == cli::kDesignError);
  CHECK(invoke({"simulate", "--design", fixture_path("III"), "--mu", "0.4", "--friction", "f.csv"}).code ==
        cli::kDesignError);
  CHECK(invoke({"plot", "--kind", "trajectory"}).code == cli::kPlotInput);
}

TEST_CASE("simulate writes its outputs and prints a summary") {
  const auto dir = scratch_dir("cli_simulate");
  const auto r = invoke({"simulate", "--design", fixture_path("III"), "--out", (dir / "III").string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.rfind("design_III: straight_and_turn | left[", 0) == 0);
  for (const char* f : {"trajectory.csv", "forces.csv", "modes.json"})
    CHECK(std::filesystem::exists(dir / "III" / f));

  // Design IV cannot stand: the summary is printed and the exit code reports it.
  const auto iv = invoke({"simulate", "--design", fixture_path("IV"), "--out", (dir / "IV").string()});
  CHECK(iv.code == cli::kDesignError);
  CHECK(iv.out.find("fails cannot_stand") != std::string::npos);

  std::ofstream(dir / "blocker") << "x";
  CHECK(invoke({"simulate", "--design", fixture_path("II"), "--out", (dir / "blocker").string()}).code ==
        cli::kIoError);
}

TEST_CASE("plot exit codes") {
  const auto dir = scratch_dir("cli_plot");
  REQUIRE(invoke({"simulate", "--design", fixture_path("II"), "--out", dir.string()}).code == cli::kOk);
  const auto csv = (dir / "trajectory.csv").string();
  CHECK(invoke({"plot", "--kind", "trajectory", "--in", csv, "--out", (dir / "t.svg").string()}).code ==
        cli::kOk);
  CHECK(std::filesystem::exists(dir / "t.svg"));
  CHECK(invoke({"plot", "--kind", "pie", "--in", csv, "--out", (dir / "t.svg").string()}).code ==
        cli::kPlotInput);
  CHECK(invoke({"plot", "--kind", "trajectory", "--in", csv, "--out", (dir / "t.png").string()}).code ==
        cli::kPlotInput);
  CHECK(invoke({"plot", "--kind", "friction_vs_beta", "--in", csv, "--out", (dir / "f.svg").string()}).code ==
        cli::kPlotInput);
  CHECK(invoke({"plot", "--kind", "trajectory", "--in", csv, "--out", (dir / "no/dir/t.svg").string()})
            .code == cli::kIoError);
}

TEST_CASE("sweep and aggregate") {
  const auto dir = scratch_dir("cli_sweep");
  std::ofstream(dir / "config.json") << R"({"out": "records.jsonl", "sample": 12, "seed": 5})";
  const auto r = invoke({"sweep", "--config", (dir / "config.json").string(), "--workers", "2"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.rfind("planned 12, resumed 0, evaluated 12", 0) == 0);
  CHECK(std::filesystem::exists(dir / "records.taxonomy.json"));
  CHECK(std::filesystem::exists(dir / "records.summary.csv"));

  const auto again = invoke({"sweep", "--config", (dir / "config.json").string(), "--resume"});
  CHECK(again.out.rfind("planned 12, resumed 12, evaluated 0", 0) == 0);

  const auto agg = invoke({"aggregate", "--in", (dir / "records.jsonl").string(), "--out",
                           (dir / "taxonomy.json").string()});
  CHECK(agg.code == cli::kOk);
  CHECK(agg.out == format_taxonomy(aggregate(read_records(dir / "records.jsonl"))));
  CHECK(invoke({"plot", "--kind", "taxonomy_bars", "--in", (dir / "taxonomy.json").string(), "--out",
                (dir / "bars.svg").string()})
            .code == cli::kOk);

  CHECK(invoke({"aggregate", "--in", (dir / "missing.jsonl").string()}).code == cli::kIoError);
  CHECK(invoke({"sweep", "--config", (dir / "missing.json").string()}).code == cli::kIoError);
}

}  // TEST_SUITE
