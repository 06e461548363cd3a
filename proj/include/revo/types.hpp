#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace revo {

using Genome = std::vector<double>;
using BeliefId = std::uint64_t;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Per-dimension search bounds (or normative intervals).
using Bounds = std::vector<Interval>;

// One member of the population. Fitness is minimized: lower is better.
struct Individual {
  Genome genome;
  double fitness = 0.0;
  BeliefId allegiance = 0;
  long age = 0;
};

// Thrown when a caller breaks a module contract (e.g. updating a belief
// system with no followers, or an inconsistent census inside the engine).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

inline void clamp_to_bounds(Genome& g, const Bounds& bounds) {
  for (std::size_t d = 0; d < g.size(); ++d) g[d] = bounds[d].clamp(g[d]);
}

}  // namespace revo
