// Independent reference implementations used to freeze expected values.
// Deliberately written with plain loops and scalar arithmetic, sharing no
// code with the library paths they check.
#ifndef HFGTFLOW_TESTS_ORACLES_HPP
#define HFGTFLOW_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

// Dense nonnegative incidence pair for a small elementary net.
struct DenseNet {
  std::size_t places = 0;
  std::size_t transitions = 0;
  std::vector<std::vector<double>> m_plus;  // places x transitions
  std::vector<std::vector<double>> m_minus; // places x transitions
};

struct TokenState {
  std::vector<double> q_b;
  std::vector<double> q_e;
};

// One step of token pushing: every transition first withdraws its input
// tokens scaled by u_minus, then deposits its output tokens scaled by u_plus,
// place by place.
inline TokenState token_push_step(const DenseNet &net, const TokenState &s,
                                  const std::vector<double> &u_minus,
                                  const std::vector<double> &u_plus,
                                  double dt) {
  TokenState out = s;
  for (std::size_t t = 0; t < net.transitions; ++t) {
    for (std::size_t p = 0; p < net.places; ++p) {
      out.q_b[p] -= net.m_minus[p][t] * u_minus[t] * dt;
      out.q_b[p] += net.m_plus[p][t] * u_plus[t] * dt;
    }
    out.q_e[t] += u_minus[t] * dt;
    out.q_e[t] -= u_plus[t] * dt;
  }
  return out;
}

// Multilevel lattice minimization of `objective` over a box [-span, span]^d
// around `center`, refined `levels` times. Returns the best value found.
inline double lattice_min(std::size_t dim,
                          const std::function<double(const std::vector<double> &)> &objective,
                          double span = 8.0, std::size_t points_per_axis = 9,
                          std::size_t levels = 10) {
  std::vector<double> center(dim, 0.0);
  double best = objective(center);
  std::vector<double> best_point = center;

  for (std::size_t level = 0; level < levels; ++level) {
    const double step =
        points_per_axis > 1 ? 2.0 * span / double(points_per_axis - 1) : 0.0;
    std::vector<std::size_t> idx(dim, 0);
    bool done = dim == 0;
    while (!done) {
      std::vector<double> z(dim);
      for (std::size_t i = 0; i < dim; ++i)
        z[i] = center[i] - span + double(idx[i]) * step;
      const double v = objective(z);
      if (v < best) {
        best = v;
        best_point = z;
      }
      std::size_t i = 0;
      for (; i < dim; ++i) {
        if (++idx[i] < points_per_axis)
          break;
        idx[i] = 0;
      }
      done = i == dim;
    }
    center = best_point;
    span = step; // next level spans one coarse cell in each direction
    if (dim == 0)
      break;
  }
  return best;
}

// Shared deterministic RNG helpers.
inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
}

inline long uniform_int(std::mt19937_64 &rng, long lo, long hi) {
  return lo + long(rng() % std::uint64_t(hi - lo + 1));
}

} // namespace oracles

#endif
