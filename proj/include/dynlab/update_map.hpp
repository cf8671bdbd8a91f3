#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace dynlab {

/// A scalar map x -> f(x) on [0, 1], optionally with a closed-form derivative
/// and a list of points the fixed-point scan should always sample.
struct UpdateMap {
  std::function<double(double)> eval;
  std::function<double(double)> derivative;  // empty: finite differences
  std::vector<double> breakpoints;
  std::string descriptor;

  double operator()(double x) const { return eval(x); }
  bool has_derivative() const { return static_cast<bool>(derivative); }
};

inline UpdateMap make_update_map(std::function<double(double)> eval, std::string descriptor = "generic") {
  UpdateMap m;
  m.eval = std::move(eval);
  m.descriptor = std::move(descriptor);
  return m;
}

/// Central difference with step h, shrunk near the ends of [0, 1] so the map
/// is only evaluated inside the unit interval when the point is inside it.
double central_difference(const std::function<double(double)>& f, double x, double h = 1e-6);

}  // namespace dynlab
