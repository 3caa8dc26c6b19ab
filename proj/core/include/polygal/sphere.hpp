#pragma once

#include <cstdint>

#include "polygal/types.hpp"

namespace polygal {

struct SphereSample {
  Matrix directions;  // one unit vector per row
  double mesh = 0.0;  // covering radius: every unit vector is within mesh of a row
  bool certified = false;  // mesh is a proven bound rather than a measurement
};

/// d = 2: uniform angular grid of m points (mesh 2 sin(pi/(2m)), certified).
/// d = 3: Fibonacci lattice, mesh measured against a denser probe lattice.
/// d > 3: normalized Gaussian directions, mesh measured against random probes.
/// A nonzero seed rotates the d = 2, 3 patterns by a seeded offset.
SphereSample sample_sphere(int d, int m, std::uint64_t seed = 0);

}  // namespace polygal
