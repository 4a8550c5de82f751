#pragma once

// Bare-bones SVG plots (scatter, polyline) for figure data. No styling beyond
// axes, tick labels and a legend.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace infoforage::pipeline {

class SvgPlot {
 public:
  struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
    bool line = false;
  };

  SvgPlot(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

  SvgPlot& log_x(bool on = true) {
    log_x_ = on;
    return *this;
  }
  SvgPlot& log_y(bool on = true) {
    log_y_ = on;
    return *this;
  }

  void scatter(std::string label, std::string color, std::vector<std::pair<double, double>> pts) {
    series_.push_back({std::move(label), std::move(color), std::move(pts), false});
  }
  void line(std::string label, std::string color, std::vector<std::pair<double, double>> pts) {
    series_.push_back({std::move(label), std::move(color), std::move(pts), true});
  }

  [[nodiscard]] std::string render() const {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series_)
      for (auto [x, y] : s.points) {
        if (!usable(x, log_x_) || !usable(y, log_y_)) continue;
        x0 = std::min(x0, tx(x));
        x1 = std::max(x1, tx(x));
        y0 = std::min(y0, ty(y));
        y1 = std::max(y1, ty(y));
      }
    if (!(x1 >= x0)) x0 = 0, x1 = 1;
    if (!(y1 >= y0)) y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;

    auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * (kWidth - kLeft - kRight); };
    auto py = [&](double y) { return kHeight - kBottom - (ty(y) - y0) / (y1 - y0) * (kHeight - kTop - kBottom); };

    std::string out;
    out += fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" font-family=\"sans-serif\" font-size=\"11\">\n", kWidth, kHeight);
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += fmt("<text x=\"%d\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">%s</text>\n", kWidth / 2, escape(title_).c_str());
    out += fmt("<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom);
    out += fmt("<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", kLeft, kTop, kLeft, kHeight - kBottom);
    for (int i = 0; i <= 4; ++i) {
      const double fx = x0 + (x1 - x0) * i / 4.0;
      const double fy = y0 + (y1 - y0) * i / 4.0;
      const double vx = log_x_ ? std::pow(10.0, fx) : fx;
      const double vy = log_y_ ? std::pow(10.0, fy) : fy;
      out += fmt("<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">%.3g</text>\n", px(vx), kHeight - kBottom + 16, vx);
      out += fmt("<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\">%.3g</text>\n", kLeft - 6, py(vy) + 4, vy);
    }
    out += fmt("<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">%s</text>\n", kWidth / 2, kHeight - 8, escape(x_label_).c_str());
    out += fmt("<text x=\"14\" y=\"%d\" text-anchor=\"middle\" transform=\"rotate(-90 14 %d)\">%s</text>\n", kHeight / 2, kHeight / 2, escape(y_label_).c_str());

    int legend_y = kTop + 4;
    for (const auto& s : series_) {
      if (s.line) {
        std::string pts;
        for (auto [x, y] : s.points)
          if (usable(x, log_x_) && usable(y, log_y_)) pts += fmt("%.2f,%.2f ", px(x), py(y));
        out += fmt("<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" points=\"%s\"/>\n", s.color.c_str(), pts.c_str());
      } else {
        for (auto [x, y] : s.points)
          if (usable(x, log_x_) && usable(y, log_y_))
            out += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\" fill-opacity=\"0.6\"/>\n", px(x), py(y), s.color.c_str());
      }
      if (!s.label.empty()) {
        out += fmt("<rect x=\"%d\" y=\"%d\" width=\"10\" height=\"10\" fill=\"%s\"/>\n", kWidth - kRight - 120, legend_y, s.color.c_str());
        out += fmt("<text x=\"%d\" y=\"%d\">%s</text>\n", kWidth - kRight - 105, legend_y + 9, escape(s.label).c_str());
        legend_y += 14;
      }
    }
    out += "</svg>\n";
    return out;
  }

 private:
  static constexpr int kWidth = 640, kHeight = 420, kLeft = 60, kRight = 20, kTop = 30, kBottom = 45;

  [[nodiscard]] static bool usable(double v, bool log_axis) { return std::isfinite(v) && (!log_axis || v > 0.0); }
  [[nodiscard]] double tx(double x) const { return log_x_ ? std::log10(x) : x; }
  [[nodiscard]] double ty(double y) const { return log_y_ ? std::log10(y) : y; }

  template <class... Args>
  static std::string fmt(const char* pattern, Args... args) {
    const int n = std::snprintf(nullptr, 0, pattern, args...);
    std::string s(static_cast<std::size_t>(n), '\0');
    std::snprintf(s.data(), s.size() + 1, pattern, args...);
    return s;
  }

  static std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
      switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out.push_back(c);
      }
    }
    return out;
  }

  std::string title_, x_label_, y_label_;
  bool log_x_ = false;
  bool log_y_ = false;
  std::vector<Series> series_;
};

}  // namespace infoforage::pipeline
