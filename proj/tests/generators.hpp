#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "vdsim/jpf.hpp"

namespace gen {

struct SeparatedPool {
  std::vector<vdsim::Jpf> jpfs;
  double lo = 0.0;
  double hi = 1.0;
};

// Affine pool whose lines never cross on [lo, hi]: line k passes through
// (lo, u_k) and (hi, v_k) with u and v sorted the same way, so the order of
// the lines is fixed across the interval. Pool order is shuffled afterwards.
inline SeparatedPool separated_pool(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<> unit(0.0, 1.0);
  SeparatedPool p;
  p.lo = 0.4 * unit(rng);
  p.hi = p.lo + 0.1 + (0.9 - p.lo) * unit(rng);
  std::vector<double> u(size), v(size);
  for (auto& x : u) x = 0.5 * unit(rng);
  for (auto& x : v) x = 0.5 + 0.5 * unit(rng);
  std::sort(u.begin(), u.end());
  std::sort(v.begin(), v.end());
  for (std::size_t k = 0; k < size; ++k) {
    const double slope = (v[k] - u[k]) / (p.hi - p.lo);
    p.jpfs.push_back(vdsim::Jpf::affine(u[k] - slope * p.lo, slope));
  }
  std::shuffle(p.jpfs.begin(), p.jpfs.end(), rng);
  return p;
}

}  // namespace gen
