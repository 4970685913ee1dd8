#include "vdsim/stats/ttest.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "vdsim/error.hpp"

namespace vdsim::stats {
namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(std::span<const double> x) {
  Moments m;
  m.mean = std::accumulate(x.begin(), x.end(), 0.0) /
           static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.var = ss / static_cast<double>(x.size() - 1);
  return m;
}

}  // namespace

TTestResult welch_t_test(std::span<const double> a,
                         std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw EstimationError("Welch test needs at least two values per group");
  }
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = ma.var / na;
  const double vb = mb.var / nb;
  if (!(va + vb > 0.0)) {
    throw EstimationError("Welch test is undefined: both groups are constant");
  }
  TTestResult r;
  r.mean_a = ma.mean;
  r.mean_b = mb.mean;
  r.t = (ma.mean - mb.mean) / std::sqrt(va + vb);
  r.dof = (va + vb) * (va + vb) /
          (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  boost::math::students_t_distribution<double> dist(r.dof);
  r.p_value =
      2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

}  // namespace vdsim::stats
