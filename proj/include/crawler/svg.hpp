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

/// \file svg.hpp
/// Minimal standalone SVG charts: one 800x600 canvas with axes, ticks,
/// polylines, markers, bars and a legend.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace crawler {

/// "Nice" tick positions (1, 2 or 5 times a power of ten) covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

std::string xml_escape(const std::string& s);

enum class MarkerShape { Circle, Square, Triangle };

class SvgChart {
 public:
  static constexpr double kWidth = 800.0;
  static constexpr double kHeight = 600.0;

  SvgChart(std::string title, std::string x_label, std::string y_label);

  /// Fixes an axis range instead of fitting it to the data.
  void set_x_range(double lo, double hi) { x_range_ = {lo, hi}; }
  void set_y_range(double lo, double hi) { y_range_ = {lo, hi}; }
  /// One data unit spans the same length on both axes (trajectories).
  void set_equal_aspect(bool on) { equal_aspect_ = on; }
  /// Category axis: labels at the given x positions instead of numeric ticks.
  void set_x_labels(std::vector<std::pair<double, std::string>> labels) {
    x_labels_ = std::move(labels);
  }

  void polyline(std::vector<Eigen::Vector2d> points, const std::string& color, double width = 1.5);
  void marker(const Eigen::Vector2d& at, const std::string& color, MarkerShape shape = MarkerShape::Circle,
              double radius = 4.0);
  void bar(double x0, double x1, double y0, double y1, const std::string& color);
  void legend(const std::string& label, const std::string& color);

  /// Complete SVG document. An empty chart still gets axes on [0, 1].
  std::string render() const;

 private:
  struct Item {
    enum class Kind { Line, Marker, Bar } kind;
    std::vector<Eigen::Vector2d> points;  // bars: two opposite corners
    std::string color;
    double size;
    MarkerShape shape = MarkerShape::Circle;
  };

  std::string title_, x_label_, y_label_;
  std::optional<std::pair<double, double>> x_range_, y_range_;
  bool equal_aspect_ = false;
  std::vector<std::pair<double, std::string>> x_labels_;
  std::vector<Item> items_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

}  // namespace crawler
