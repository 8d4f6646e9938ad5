#pragma once

// Seeded sample sets shared by the unit and acceptance suites.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "aft/redundancy.hpp"
#include "aft/transform.hpp"

namespace fixtures {

struct QualifyCase {
  std::string name;
  aft::PairedSamples samples;
  aft::TransformSpec transform;
  double target_alpha;
  double target_epsilon;
  double step;
};

inline aft::PairedSamples noisy_line(std::uint64_t seed, std::size_t n, double scale, double offset,
                                     double noise) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x(-50, 50);
  std::normal_distribution<double> e(0.0, noise);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(x(rng));
    ys.push_back(scale * xs.back() + offset + (noise > 0 ? e(rng) : 0.0));
  }
  return aft::PairedSamples::from_reals(xs, ys);
}

/// Ten qualification problems: exact, noisy, heavy-tailed and hopeless.
inline std::vector<QualifyCase> qualify_cases() {
  using namespace aft::transform;
  std::vector<QualifyCase> out;
  out.push_back({"exact negate", noisy_line(1, 50, -1, 0, 0), Negate{}, 1.0, 0.0, 0.1});
  out.push_back({"exact celsius", noisy_line(2, 80, 5.0 / 9.0, -160.0 / 9.0, 0),
                 Affine{5.0 / 9.0, -160.0 / 9.0}, 1.0, 0.5, 0.01});
  out.push_back({"noise 0.1 full", noisy_line(3, 200, 1, 0, 0.1), Identity{}, 1.0, 1.0, 0.05});
  out.push_back({"noise 0.1 ninety", noisy_line(4, 200, 1, 0, 0.1), Identity{}, 0.9, 1.0, 0.01});
  out.push_back({"noise 1 half", noisy_line(5, 300, 2, 1, 1.0), Affine{2, 1}, 0.5, 3.0, 0.1});
  out.push_back({"noise 1 too tight", noisy_line(6, 300, 2, 1, 1.0), Affine{2, 1}, 0.99, 0.5, 0.1});
  out.push_back({"wrong sign", noisy_line(7, 100, 1, 0, 0.5), Negate{}, 0.8, 5.0, 0.5});
  out.push_back({"coarse step", noisy_line(8, 150, -1, 3, 0.3), Affine{-1, 3}, 0.95, 2.0, 0.25});
  out.push_back({"predictor", noisy_line(9, 400, 1, 0, 0), StochasticPredictor{0.5, 0.9, 77},
                 0.85, 2.0, 0.1});
  out.push_back({"noise draws", noisy_line(10, 120, 1, 0, 0), BoundedNoise{0.3, 5}, 1.0, 0.3, 0.1});
  return out;
}

}  // namespace fixtures
