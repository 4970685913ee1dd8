#pragma once

// Independent reference implementations used as test oracles. None of them
// call into the code paths they check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vdsim/jpf.hpp"
#include "vdsim/selection.hpp"
#include "vdsim/strike_sheet.hpp"
#include "vdsim/verdict.hpp"

namespace oracle {

// Pairwise order check on an evenly spaced grid.
inline bool grid_separated(std::span<const vdsim::Jpf> pool, double lo,
                           double hi, int points) {
  std::vector<std::vector<double>> v(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    for (int g = 0; g < points; ++g) {
      const double f =
          points == 1 ? lo : lo + (hi - lo) * g / static_cast<double>(points - 1);
      v[k].push_back(pool[k](f));
    }
  }
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = a + 1; b < pool.size(); ++b) {
      bool above = false;
      bool below = false;
      for (int g = 0; g < points; ++g) {
        if (v[a][g] > v[b][g]) above = true;
        if (v[a][g] < v[b][g]) below = true;
      }
      if (above && below) return false;
    }
  }
  return true;
}

struct TreeValue {
  double prosecution = 0.0;
  double defense = 0.0;
  int root_strike = 0;  // 1 when the mover at the queried node strikes
  long leaves = 0;
};

// Plain recursive enumeration of the one-pass strike game, no memo.
class GameTree {
 public:
  GameTree(std::vector<double> pros_view, std::vector<double> def_view,
           std::size_t jury_size, const vdsim::VerdictModel& model)
      : pv_(std::move(pros_view)),
        dv_(std::move(def_view)),
        jury_(jury_size),
        model_(model) {}

  TreeValue solve(std::size_t cand, std::vector<std::size_t> seated, int sp,
                  int sd, bool pros_to_move) const {
    if (seated.size() == jury_) {
      std::vector<double> a, b;
      for (auto k : seated) {
        a.push_back(pv_[k]);
        b.push_back(dv_[k]);
      }
      return {vdsim::conviction_probability(model_, a, jury_),
              vdsim::conviction_probability(model_, b, jury_), 0, 1};
    }
    if (pros_to_move) {
      TreeValue pass = solve(cand, seated, sp, sd, false);
      pass.root_strike = 0;
      if (sp == 0) return pass;
      TreeValue strike = solve(cand + 1, seated, sp - 1, sd, true);
      const long leaves = pass.leaves + strike.leaves;
      TreeValue best = strike.prosecution > pass.prosecution ? strike : pass;
      best.root_strike = strike.prosecution > pass.prosecution;
      best.leaves = leaves;
      return best;
    }
    auto with = seated;
    with.push_back(cand);
    TreeValue pass = solve(cand + 1, with, sp, sd, true);
    pass.root_strike = 0;
    if (sd == 0) return pass;
    TreeValue strike = solve(cand + 1, seated, sp, sd - 1, true);
    const long leaves = pass.leaves + strike.leaves;
    TreeValue best = strike.defense < pass.defense ? strike : pass;
    best.root_strike = strike.defense < pass.defense;
    best.leaves = leaves;
    return best;
  }

 private:
  std::vector<double> pv_;
  std::vector<double> dv_;
  std::size_t jury_;
  vdsim::VerdictModel model_;
};

// Solves the normal equations X'X b = X'y by Gauss-Jordan elimination with
// partial pivoting on plain nested vectors.
inline std::vector<double> normal_equations(
    const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
  const std::size_t k = X.front().size();
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t r = 0; r < X.size(); ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) a[i][j] += X[r][i] * X[r][j];
      a[i][k] += X[r][i] * y[r];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double m = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= k; ++j) a[r][j] -= m * a[c][j];
    }
  }
  std::vector<double> b(k);
  for (std::size_t i = 0; i < k; ++i) b[i] = a[i][k] / a[i][i];
  return b;
}

// HC1 covariance built term by term: explicit inverse of X'X via LU, then a
// loop over rows for the meat.
inline Eigen::MatrixXd sandwich_hc1(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& y) {
  const Eigen::MatrixXd xtx = X.transpose() * X;
  const Eigen::MatrixXd inv = xtx.fullPivLu().inverse();
  const Eigen::VectorXd b = inv * (X.transpose() * y);
  const Eigen::VectorXd e = y - X * b;
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(X.cols(), X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const Eigen::VectorXd x = X.row(r).transpose();
    meat += e(r) * e(r) * (x * x.transpose());
  }
  const double n = static_cast<double>(X.rows());
  const double k = static_cast<double>(X.cols());
  return n / (n - k) * inv * meat * inv;
}

// Welch statistic from the textbook formula.
inline double welch_t(const std::vector<double>& a,
                      const std::vector<double>& b) {
  auto mean = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v;
    return s / x.size();
  };
  auto var = [&](const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return s / (x.size() - 1);
  };
  return (mean(a) - mean(b)) /
         std::sqrt(var(a) / a.size() + var(b) / b.size());
}

// The hypothetical 30-juror strike sheet, row 1 seat 1 through row 3 seat 10.
inline vdsim::StrikeSheet example_sheet() {
  using vdsim::Disposition;
  const char* cells[30] = {"JC", "JC", "J1", "D1", "D2", "J2", "JC", "JC",
                           "P1", "J3", "DC", "J4", "JC", "D3", "PC", "D4",
                           "P2", "D5", "P3", "JC", "J5", "D6", "P4", "DC",
                           "J6", "NU", "PC", "NU", "JC", "NU"};
  vdsim::StrikeSheet sheet;
  for (int i = 0; i < 30; ++i) {
    const std::string c = cells[i];
    vdsim::SheetEntry e;
    e.juror_id = i + 1;
    if (c.size() == 2 && std::isdigit(static_cast<unsigned char>(c[1]))) {
      e.disposition = c[0] == 'J'   ? Disposition::kJ
                      : c[0] == 'D' ? Disposition::kD
                                    : Disposition::kP;
      e.ordinal = c[1] - '0';
    } else {
      e.disposition = c == "JC"   ? Disposition::kJC
                      : c == "DC" ? Disposition::kDC
                      : c == "PC" ? Disposition::kPC
                                  : Disposition::kNU;
    }
    sheet.entries.push_back(e);
  }
  return sheet;
}

}  // namespace oracle
