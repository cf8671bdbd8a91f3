#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dynlab {

enum class Terminal { converged, cycle, max_iterations };

const char* terminal_name(Terminal t);

struct Trajectory {
  std::vector<double> states;   // states[0] is the start
  Terminal terminal = Terminal::max_iterations;
  double limit = 0.0;           // converged: f(states.back())
  std::size_t period = 0;       // cycle: detected period
  std::vector<double> support;  // cycle: the last `period` states
  std::size_t steps = 0;        // states.size() - 1
};

struct IterateOptions {
  std::size_t max_steps = 1000000;
  double tol = 1e-10;
  std::size_t max_period = 16;
};

/// Iterates x_{t+1} = f(x_t). Stops without appending once |f(x) - x| <= tol,
/// on a period-k revisit (2 <= k <= max_period), or after max_steps.
Trajectory iterate(const std::function<double(double)>& f, double x0, const IterateOptions& opts = {});

struct Segment {
  double x0, y0, x1, y1;
};

/// Two segments per step: up/down to the curve, then across to the diagonal.
std::vector<Segment> cobweb_points(const Trajectory& trajectory);

}  // namespace dynlab
