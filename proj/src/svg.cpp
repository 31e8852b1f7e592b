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

#include "crawler/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace crawler {

namespace {

constexpr double kLeft = 75.0, kRight = 25.0, kTop = 45.0, kBottom = 65.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v, double step) {
  char buf[32];
  const int digits = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
  std::snprintf(buf, sizeof buf, "%.*f", std::clamp(digits, 0, 6), std::abs(v) < 1e-12 * step ? 0.0 : v);
  return buf;
}

// Pads a degenerate range so it can be drawn.
std::pair<double, double> widen(double lo, double hi) {
  if (!(lo <= hi)) return {0.0, 1.0};
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) {
    const double pad = std::max(0.5, std::abs(lo) * 0.1);
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  std::tie(lo, hi) = widen(lo, hi);
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step)
    ticks.push_back(t);
  return ticks;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgChart::polyline(std::vector<Eigen::Vector2d> points, const std::string& color, double width) {
  if (points.size() < 2) return;
  items_.push_back({Item::Kind::Line, std::move(points), color, width});
}

void SvgChart::marker(const Eigen::Vector2d& at, const std::string& color, MarkerShape shape,
                      double radius) {
  items_.push_back({Item::Kind::Marker, {at}, color, radius, shape});
}

void SvgChart::bar(double x0, double x1, double y0, double y1, const std::string& color) {
  items_.push_back({Item::Kind::Bar, {{x0, y0}, {x1, y1}}, color, 0.0});
}

void SvgChart::legend(const std::string& label, const std::string& color) {
  legend_.emplace_back(label, color);
}

std::string SvgChart::render() const {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& it : items_)
    for (const auto& p : it.points) {
      if (!std::isfinite(p.x()) || !std::isfinite(p.y())) continue;
      xlo = std::min(xlo, p.x());
      xhi = std::max(xhi, p.x());
      ylo = std::min(ylo, p.y());
      yhi = std::max(yhi, p.y());
    }
  if (xlo > xhi) xlo = 0.0, xhi = 1.0;
  if (ylo > yhi) ylo = 0.0, yhi = 1.0;
  for (const auto& [x, label] : x_labels_) {
    xlo = std::min(xlo, x - 0.5);
    xhi = std::max(xhi, x + 0.5);
  }
  if (x_range_) std::tie(xlo, xhi) = *x_range_;
  if (y_range_) std::tie(ylo, yhi) = *y_range_;
  std::tie(xlo, xhi) = widen(xlo, xhi);
  std::tie(ylo, yhi) = widen(ylo, yhi);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  if (!x_range_ && x_labels_.empty()) {
    const auto t = nice_ticks(xlo, xhi);
    const double step = t.size() > 1 ? t[1] - t[0] : 1.0;
    xlo = std::min(xlo, t.front() > xlo ? t.front() - step : t.front());
    xhi = std::max(xhi, t.back() < xhi ? t.back() + step : t.back());
  }
  if (!y_range_) {
    const auto t = nice_ticks(ylo, yhi);
    const double step = t.size() > 1 ? t[1] - t[0] : 1.0;
    ylo = std::min(ylo, t.front() > ylo ? t.front() - step : t.front());
    yhi = std::max(yhi, t.back() < yhi ? t.back() + step : t.back());
  }
  if (equal_aspect_) {
    const double s = std::max((xhi - xlo) / pw, (yhi - ylo) / ph);
    const double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
    xlo = cx - 0.5 * s * pw, xhi = cx + 0.5 * s * pw;
    ylo = cy - 0.5 * s * ph, yhi = cy + 0.5 * s * ph;
  }
  auto px = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * pw; };
  auto py = [&](double y) { return kTop + (yhi - y) / (yhi - ylo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<defs><clipPath id=\"plot\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
     << pw << "\" height=\"" << ph << "\"/></clipPath></defs>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"26\" text-anchor=\"middle\" font-size=\"16\">"
     << xml_escape(title_) << "</text>\n";

  // Axes and ticks
  os << "<g stroke=\"#444\" fill=\"none\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
     << pw << "\" height=\"" << ph << "\"/></g>\n<g font-size=\"11\" fill=\"#222\">\n";
  if (x_labels_.empty()) {
    const auto t = nice_ticks(xlo, xhi);
    const double step = t.size() > 1 ? t[1] - t[0] : 1.0;
    for (double x : t) {
      os << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(px(x))
         << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"#444\"/>";
      os << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 18)
         << "\" text-anchor=\"middle\">" << tick_label(x, step) << "</text>\n";
    }
  } else {
    for (const auto& [x, label] : x_labels_)
      os << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 18)
         << "\" text-anchor=\"middle\">" << xml_escape(label) << "</text>\n";
  }
  {
    const auto t = nice_ticks(ylo, yhi);
    const double step = t.size() > 1 ? t[1] - t[0] : 1.0;
    for (double y : t) {
      os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(kLeft)
         << "\" y2=\"" << num(py(y)) << "\" stroke=\"#444\"/>";
      os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(y) + 4)
         << "\" text-anchor=\"end\">" << tick_label(y, step) << "</text>\n";
    }
  }
  os << "</g>\n";
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 18)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(x_label_) << "</text>\n";
  os << "<text transform=\"translate(20," << num(kTop + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(y_label_)
     << "</text>\n";

  os << "<g clip-path=\"url(#plot)\">\n";
  for (const auto& it : items_) {
    switch (it.kind) {
      case Item::Kind::Line: {
        os << "<polyline fill=\"none\" stroke=\"" << it.color << "\" stroke-width=\"" << num(it.size)
           << "\" points=\"";
        for (std::size_t i = 0; i < it.points.size(); ++i)
          os << (i ? " " : "") << num(px(it.points[i].x())) << ',' << num(py(it.points[i].y()));
        os << "\"/>\n";
        break;
      }
      case Item::Kind::Marker: {
        const double x = px(it.points[0].x()), y = py(it.points[0].y()), r = it.size;
        if (it.shape == MarkerShape::Circle) {
          os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r)
             << "\" fill=\"" << it.color << "\"/>\n";
        } else if (it.shape == MarkerShape::Square) {
          os << "<rect x=\"" << num(x - r) << "\" y=\"" << num(y - r) << "\" width=\"" << num(2 * r)
             << "\" height=\"" << num(2 * r) << "\" fill=\"" << it.color << "\"/>\n";
        } else {
          os << "<polygon points=\"" << num(x) << ',' << num(y - r) << ' ' << num(x - r) << ','
             << num(y + r) << ' ' << num(x + r) << ',' << num(y + r) << "\" fill=\"" << it.color
             << "\"/>\n";
        }
        break;
      }
      case Item::Kind::Bar: {
        const double x0 = px(std::min(it.points[0].x(), it.points[1].x()));
        const double x1 = px(std::max(it.points[0].x(), it.points[1].x()));
        const double y0 = py(std::max(it.points[0].y(), it.points[1].y()));
        const double y1 = py(std::min(it.points[0].y(), it.points[1].y()));
        os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0)
           << "\" height=\"" << num(y1 - y0) << "\" fill=\"" << it.color << "\"/>\n";
        break;
      }
    }
  }
  os << "</g>\n";

  if (!legend_.empty()) {
    os << "<g font-size=\"12\">\n";
    const double x = kLeft + pw - 150.0;
    for (std::size_t i = 0; i < legend_.size(); ++i) {
      const double y = kTop + 16.0 + 18.0 * static_cast<double>(i);
      os << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"12\" height=\"12\" fill=\""
         << legend_[i].second << "\"/><text x=\"" << num(x + 18) << "\" y=\"" << num(y + 1) << "\">"
         << xml_escape(legend_[i].first) << "</text>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace crawler
