#pragma once

#include <span>
#include <string>
#include <vector>

namespace maillard::svg {

struct Bar {
  std::string label;
  double mean = 0.0;
  double std = 0.0;
  std::vector<std::string> classes;  // e.g. "no-guarantee", "fixed-budget"
};

struct Point {
  double x = 0.0;
  std::string x_label;
  double mean = 0.0;
  double std = 0.0;
};

// Bar chart of means with +/- std error bars. One <rect class="bar"> per datum.
// Policies without a guarantee render shaded, fixed-budget ones hatched.
std::string bar_chart(const std::string& title, std::span<const Bar> bars);

// Points joined by a polyline, each with an error bar. One <circle
// class="point"> per datum.
std::string line_chart(const std::string& title, const std::string& x_title,
                       std::span<const Point> points);

std::string escape(const std::string& text);

}  // namespace maillard::svg
