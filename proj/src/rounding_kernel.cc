#include "dynbal/rounding_kernel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dynbal/errors.h"

namespace dynbal {

DenseMatrix::DenseMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      double& v = m_(i, j);
      if (!std::isfinite(v) || v > 1.0 + kEpsClip || v < -1.0 - kEpsClip) {
        throw InvalidArgument("matrix entry outside [-1,1] at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      }
      v = std::clamp(v, -1.0, 1.0);
    }
  }
}

DenseMatrix DenseMatrix::FromColumns(const std::vector<std::vector<double>>& columns,
                                     int rows) {
  if (rows < 0) rows = columns.empty() ? 0 : static_cast<int>(columns[0].size());
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(columns.size()));
  for (size_t j = 0; j < columns.size(); ++j) {
    if (static_cast<int>(columns[j].size()) != rows) {
      throw DimensionMismatch("column " + std::to_string(j) + " has length " +
                              std::to_string(columns[j].size()));
    }
    for (int i = 0; i < rows; ++i) m(i, static_cast<Eigen::Index>(j)) = columns[j][i];
  }
  return DenseMatrix(std::move(m));
}

std::vector<double> DenseMatrix::Multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != cols()) {
    throw DimensionMismatch("vector length " + std::to_string(x.size()) + " vs " +
                            std::to_string(cols()) + " columns");
  }
  std::vector<double> out(rows(), 0.0);
  for (int j = 0; j < cols(); ++j) {
    if (x[j] == 0.0) continue;
    for (int i = 0; i < rows(); ++i) out[i] += m_(i, j) * x[j];
  }
  return out;
}

FractionalSigning::FractionalSigning(std::vector<double> v) : values(std::move(v)) {
  RecomputeFractional();
}

void FractionalSigning::RecomputeFractional() {
  fractional.clear();
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (!IsIntegral(values[i])) fractional.push_back(i);
  }
}

namespace {

// Null vector of the columns `w` of `a`, or empty when the block has full column
// rank and `require_dependent` is set.
std::vector<double> NullDirection(const DenseMatrix& a, const std::vector<int>& w,
                                  bool require_dependent) {
  const int n = a.rows();
  const int c = static_cast<int>(w.size());
  Eigen::MatrixXd block(std::max(n, 1), c);
  block.setZero();
  for (int j = 0; j < c; ++j) {
    for (int i = 0; i < n; ++i) block(i, j) = a(i, w[j]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (require_dependent && c <= block.rows()) {
    double smax = s.size() > 0 ? s(0) : 0.0;
    double smin = s.size() > 0 ? s(s.size() - 1) : 0.0;
    if (smin > 1e-10 * std::max(1.0, smax)) return {};
  }
  Eigen::VectorXd d = svd.matrixV().col(c - 1);
  double scale = d.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw NumericalFailure("degenerate null direction");
  }
  std::vector<double> out(c);
  int first = -1;
  for (int j = 0; j < c; ++j) {
    out[j] = d(j) / scale;
    if (std::abs(out[j]) < 1e-12) out[j] = 0.0;
    if (first < 0 && out[j] != 0.0) first = j;
  }
  if (first >= 0 && out[first] < 0) {
    for (double& v : out) v = -v;
  }
  return out;
}

}  // namespace

FractionalSigning MoveToBasic(const DenseMatrix& a, const std::vector<double>& x,
                              const MoveOptions& options) {
  const int n = a.rows();
  const int k = a.cols();
  if (static_cast<int>(x.size()) != k) {
    throw DimensionMismatch("x has length " + std::to_string(x.size()) + ", matrix has " +
                            std::to_string(k) + " columns");
  }
  std::vector<double> y(k);
  for (int i = 0; i < k; ++i) {
    if (!std::isfinite(x[i])) throw NumericalFailure("non-finite input coordinate");
    y[i] = std::clamp(x[i], -1.0, 1.0);
  }
  FractionalSigning result(std::move(y));
  if (options.rule == BasisRule::kRowBound &&
      static_cast<int>(result.fractional.size()) <= n) {
    return result;
  }

  std::vector<int> frac;
  for (int i : result.fractional) {
    bool zero = true;
    for (int r = 0; r < n && zero; ++r) zero = a(r, i) == 0.0;
    if (zero) {
      result.values[i] = 1.0;
    } else {
      frac.push_back(i);
    }
  }

  std::vector<double>& v = result.values;
  const int budget = 2 * k + 8;
  for (int iter = 0;; ++iter) {
    const int f = static_cast<int>(frac.size());
    if (f == 0) break;
    if (options.rule == BasisRule::kRowBound && f <= n) break;
    if (iter > budget) throw NumericalFailure("pivot budget exhausted");

    std::vector<int> w(frac.begin(), frac.begin() + std::min(f, n + 1));
    std::vector<double> d = NullDirection(a, w, f <= n);
    if (d.empty()) break;

    // Shortest step to a bound along +d and along -d.
    double best_plus = std::numeric_limits<double>::infinity();
    double best_minus = best_plus;
    int arg_plus = -1, arg_minus = -1;
    for (size_t j = 0; j < w.size(); ++j) {
      if (d[j] == 0.0) continue;
      double yi = v[w[j]];
      double sp = d[j] > 0 ? (1.0 - yi) / d[j] : (-1.0 - yi) / d[j];
      double sm = d[j] > 0 ? (yi + 1.0) / d[j] : (yi - 1.0) / d[j];
      if (sp < best_plus) best_plus = sp, arg_plus = static_cast<int>(j);
      if (sm < best_minus) best_minus = sm, arg_minus = static_cast<int>(j);
    }
    if (arg_plus < 0) throw NumericalFailure("zero null direction");
    double step;
    int arg;
    if (best_plus <= best_minus) {
      step = best_plus;
      arg = arg_plus;
    } else {
      step = -best_minus;
      arg = arg_minus;
    }
    for (size_t j = 0; j < w.size(); ++j) {
      v[w[j]] = std::clamp(v[w[j]] + step * d[j], -1.0, 1.0);
    }
    v[w[arg]] = (step * d[arg] > 0) ? 1.0 : -1.0;

    std::vector<int> next;
    next.reserve(frac.size());
    for (int i : frac) {
      if (v[i] >= 1.0 - kEpsInt) {
        v[i] = 1.0;
      } else if (v[i] <= -1.0 + kEpsInt) {
        v[i] = -1.0;
      } else {
        next.push_back(i);
      }
    }
    if (next.size() >= frac.size()) throw NumericalFailure("pivot made no progress");
    frac.swap(next);
  }
  result.RecomputeFractional();
  return result;
}

double ResidualNorm(const DenseMatrix& a, const std::vector<double>& x,
                    const std::vector<double>& y) {
  std::vector<double> ax = a.Multiply(x);
  std::vector<double> ay = a.Multiply(y);
  double worst = 0.0;
  for (size_t i = 0; i < ax.size(); ++i) worst = std::max(worst, std::abs(ay[i] - ax[i]));
  return worst;
}

bool ResidualCheck(const DenseMatrix& a, const std::vector<double>& x,
                   const std::vector<double>& y, double tol) {
  if (x.size() != y.size()) throw DimensionMismatch("x and y lengths differ");
  return ResidualNorm(a, x, y) <= tol;
}

}  // namespace dynbal
