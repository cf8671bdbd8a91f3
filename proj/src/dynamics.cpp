#include "dynlab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "dynlab/errors.hpp"

namespace dynlab {

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::converged: return "converged";
    case Terminal::cycle: return "cycle";
    case Terminal::max_iterations: return "max-iterations";
  }
  return "unknown";
}

Trajectory iterate(const std::function<double(double)>& f, double x0, const IterateOptions& opts) {
  if (!std::isfinite(x0)) throw DomainError("iterate: x0 must be finite");
  if (!(opts.tol > 0.0)) throw DomainError("iterate: tol must be positive");

  Trajectory tr;
  tr.states.push_back(x0);
  while (tr.states.size() - 1 < opts.max_steps) {
    const double x = tr.states.back();
    const double y = f(x);
    if (!std::isfinite(y)) throw NumericError("iterate: map returned a non-finite value");
    if (std::abs(y - x) <= opts.tol) {
      tr.terminal = Terminal::converged;
      tr.limit = y;
      break;
    }
    tr.states.push_back(y);

    const std::size_t n = tr.states.size() - 1;
    bool found = false;
    for (std::size_t k = 2; k <= opts.max_period && k <= n; ++k) {
      if (std::abs(tr.states[n] - tr.states[n - k]) > opts.tol) continue;
      const auto first = tr.states.end() - static_cast<std::ptrdiff_t>(k);
      const auto [lo, hi] = std::minmax_element(first, tr.states.end());
      if (*hi - *lo <= opts.tol) continue;
      tr.terminal = Terminal::cycle;
      tr.period = k;
      tr.support.assign(first, tr.states.end());
      found = true;
      break;
    }
    if (found) break;
  }
  tr.steps = tr.states.size() - 1;
  return tr;
}

std::vector<Segment> cobweb_points(const Trajectory& trajectory) {
  if (trajectory.states.empty()) throw DomainError("cobweb_points: trajectory is empty");
  std::vector<Segment> out;
  out.reserve(2 * trajectory.steps);
  for (std::size_t t = 0; t + 1 < trajectory.states.size(); ++t) {
    const double a = trajectory.states[t];
    const double b = trajectory.states[t + 1];
    out.push_back({a, a, a, b});
    out.push_back({a, b, b, b});
  }
  return out;
}

}  // namespace dynlab
