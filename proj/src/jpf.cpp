#include "vdsim/jpf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdsim/error.hpp"

namespace vdsim {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Differences smaller than this are ties.
constexpr double kTieTolerance = 1e-12;

int sign_of(double d) {
  if (d > kTieTolerance) return 1;
  if (d < -kTieTolerance) return -1;
  return 0;
}

// Fact indices inside (lo, hi) where a clamped affine function has a kink.
void add_kinks(const Jpf& j, double lo, double hi, std::vector<double>& out) {
  if (j.kind() != Jpf::Kind::kAffine || j.slope() == 0.0) return;
  for (double level : {0.0, 1.0}) {
    const double f = (level - j.intercept()) / j.slope();
    if (f > lo && f < hi) out.push_back(f);
  }
}

}  // namespace

FactIndex::FactIndex(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError("fact index must lie in [0,1], got " +
                      std::to_string(value));
  }
}

Jpf Jpf::constant(double c) {
  if (!std::isfinite(c)) throw ConfigError("constant JPF level must be finite");
  return Jpf(Kind::kConstant, c, 0.0);
}

Jpf Jpf::identity() { return Jpf(Kind::kIdentity, 0.0, 1.0); }

Jpf Jpf::affine(double intercept, double slope) {
  if (!std::isfinite(intercept) || !std::isfinite(slope)) {
    throw ConfigError("affine JPF parameters must be finite");
  }
  if (slope < 0.0) {
    throw ConfigError("affine JPF slope must be non-negative, got " +
                      std::to_string(slope));
  }
  return Jpf(Kind::kAffine, intercept, slope);
}

double Jpf::operator()(double f) const {
  switch (kind_) {
    case Kind::kConstant:
      return clamp01(intercept_);
    case Kind::kIdentity:
      return f;
    case Kind::kAffine:
      return clamp01(intercept_ + slope_ * f);
  }
  return f;
}

double Jpf::operator()(FactIndex f) const { return (*this)(f.value()); }

std::string Jpf::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kConstant:
      os << "Constant(" << intercept_ << ")";
      break;
    case Kind::kIdentity:
      os << "Identity";
      break;
    case Kind::kAffine:
      os << "Affine(" << intercept_ << ", " << slope_ << ")";
      break;
  }
  return os.str();
}

double eval_jpf(const Jpf& jpf, FactIndex f) { return jpf(f); }

FSet::FSet(double lo_, double hi_, int grid_points_)
    : lo(lo_), hi(hi_), grid_points(grid_points_) {
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
    throw ConfigError("FSet requires 0 <= lo <= hi <= 1");
  }
  if (grid_points < 2) throw ConfigError("FSet requires grid_points >= 2");
}

std::vector<double> FSet::grid() const {
  std::vector<double> g(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    g[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1);
  }
  return g;
}

bool is_f_separated(std::span<const Jpf> pool, const FSet& fset) {
  if (pool.empty()) throw ConfigError("is_f_separated: empty pool");
  std::vector<double> points;
  for (std::size_t l = 0; l < pool.size(); ++l) {
    for (std::size_t m = l + 1; m < pool.size(); ++m) {
      points.assign({fset.lo, fset.hi});
      add_kinks(pool[l], fset.lo, fset.hi, points);
      add_kinks(pool[m], fset.lo, fset.hi, points);
      // The difference is linear between consecutive points, so its sign
      // pattern on the interval is the sign pattern at these points.
      bool pos = false;
      bool neg = false;
      for (double f : points) {
        const int s = sign_of(pool[l](f) - pool[m](f));
        pos = pos || s > 0;
        neg = neg || s < 0;
      }
      if (pos && neg) return false;
    }
  }
  return true;
}

}  // namespace vdsim
