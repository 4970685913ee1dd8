#pragma once

#include <span>
#include <string>
#include <vector>

namespace vdsim {

// Strength of the case against the defendant: 0 is the weakest case for
// conviction, 1 the strongest.
class FactIndex {
 public:
  FactIndex() = default;
  explicit FactIndex(double value);

  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

// Juror predisposition function: maps a fact index to the juror's
// predisposition to convict, in [0, 1].
//
// Constant(0) and Constant(1) are the always-acquit and always-convict
// extremes; Identity is the impartial juror. Affine evaluations are clamped
// into [0, 1] and slopes are non-negative.
class Jpf {
 public:
  enum class Kind { kConstant, kIdentity, kAffine };

  static Jpf constant(double c);
  static Jpf identity();
  static Jpf affine(double intercept, double slope);

  Kind kind() const { return kind_; }
  double intercept() const { return intercept_; }
  double slope() const { return slope_; }

  double operator()(FactIndex f) const;
  double operator()(double f) const;

  std::string describe() const;

  friend bool operator==(const Jpf&, const Jpf&) = default;

 private:
  Jpf(Kind kind, double intercept, double slope)
      : kind_(kind), intercept_(intercept), slope_(slope) {}

  Kind kind_ = Kind::kIdentity;
  double intercept_ = 0.0;
  double slope_ = 1.0;
};

double eval_jpf(const Jpf& jpf, FactIndex f);

// A closed interval of fact indices together with the evaluation grid used
// by invariance checks.
struct FSet {
  double lo = 0.0;
  double hi = 1.0;
  int grid_points = 11;

  FSet() = default;
  FSet(double lo, double hi, int grid_points);

  std::vector<double> grid() const;
};

// True iff no pair of JPFs changes strict order anywhere on the interval:
// for every pair the sign of j_l(F) - j_m(F) is constant wherever it is
// nonzero. Exact for the clamped-affine family, since each difference is
// piecewise linear with breakpoints where a member hits 0 or 1.
bool is_f_separated(std::span<const Jpf> pool, const FSet& fset);

}  // namespace vdsim
