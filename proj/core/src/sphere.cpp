#include "polygal/sphere.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace polygal {

namespace {

Matrix fibonacci(int m, double offset) {
  Matrix out(m, 3);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < m; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / m;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i + offset;
    out.row(i) << r * std::cos(phi), r * std::sin(phi), z;
  }
  return out;
}

double measured_mesh(const Matrix& dirs, const Matrix& probes) {
  double worst = 0.0;
  for (int p = 0; p < probes.rows(); ++p) {
    const double best_dot = (dirs * probes.row(p).transpose()).maxCoeff();
    worst = std::max(worst, std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, best_dot))));
  }
  return worst;
}

}  // namespace

SphereSample sample_sphere(int d, int m, std::uint64_t seed) {
  if (d < 2) throw Error(ErrorCode::BadDimension, "sphere sampling needs d >= 2");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SphereSample s;
  if (d == 2) {
    const double step = 2.0 * std::numbers::pi / m;
    const double offset = seed == 0 ? 0.0 : unit(rng) * step;
    s.directions.resize(m, 2);
    for (int i = 0; i < m; ++i) s.directions.row(i) << std::cos(offset + step * i), std::sin(offset + step * i);
    s.mesh = 2.0 * std::sin(std::numbers::pi / (2.0 * m));
    s.certified = true;
    return s;
  }
  if (d == 3) {
    const double offset = seed == 0 ? 0.0 : unit(rng) * 2.0 * std::numbers::pi;
    s.directions = fibonacci(m, offset);
    const Matrix probes = fibonacci(std::min(4 * m, 4000) | 1, offset + 0.5);
    s.mesh = measured_mesh(s.directions, probes);
    return s;
  }
  std::normal_distribution<double> gauss;
  auto random_dirs = [&](int count) {
    Matrix out(count, d);
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < d; ++j) out(i, j) = gauss(rng);
      out.row(i).normalize();
    }
    return out;
  };
  s.directions = random_dirs(m);
  s.mesh = measured_mesh(s.directions, random_dirs(std::min(4 * m, 4000)));
  return s;
}

}  // namespace polygal
