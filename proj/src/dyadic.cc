#include "dynbal/dyadic.h"

#include <algorithm>
#include <cmath>

#include "dynbal/errors.h"
#include "dynbal/rounding_kernel.h"

namespace dynbal {

int CeilLog2(int64_t t) {
  int k = 0;
  while ((int64_t{1} << k) < t) ++k;
  return k;
}

int TwoAdicValuation(int64_t t) {
  if (t <= 0) throw InvalidArgument("valuation of a nonpositive number");
  return __builtin_ctzll(static_cast<uint64_t>(t));
}

double SignedDiscrepancy(const std::vector<std::vector<double>>& vectors,
                         const std::vector<int>& signs, int dim, size_t begin, size_t end) {
  end = std::min(end, vectors.size());
  std::vector<double> s(dim, 0.0);
  for (size_t i = begin; i < end; ++i) {
    for (int c = 0; c < dim; ++c) s[c] += signs[i] * vectors[i][c];
  }
  double worst = 0.0;
  for (double x : s) worst = std::max(worst, std::abs(x));
  return worst;
}

std::vector<int> KernelSigner::Sign(const std::vector<std::vector<double>>& vectors, int dim) {
  if (vectors.empty()) return {};
  DenseMatrix a = DenseMatrix::FromColumns(vectors, dim);
  FractionalSigning y = MoveToBasic(a, std::vector<double>(vectors.size(), 0.0),
                                    MoveOptions{BasisRule::kIndependent});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> out(vectors.size());
  for (size_t i = 0; i < vectors.size(); ++i) {
    double v = y.values[i];
    if (!std::isfinite(v)) throw NumericalFailure("signer produced a non-finite value");
    if (v >= 1.0 - kEpsInt) {
      out[i] = 1;
    } else if (v <= -1.0 + kEpsInt) {
      out[i] = -1;
    } else {
      out[i] = u(rng_) < (1.0 + v) / 2.0 ? 1 : -1;
    }
  }
  return out;
}

DyadicResigner::DyadicResigner(int dim, std::unique_ptr<OfflineSigner> signer)
    : dim_(dim), signer_(std::move(signer)), sum_(dim, 0.0) {
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  if (!signer_) throw InvalidArgument("missing signer");
}

DyadicResigner::DyadicResigner(int dim, uint64_t seed)
    : DyadicResigner(dim, std::make_unique<KernelSigner>(seed)) {}

ResignRange DyadicResigner::Insert(const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != dim_) {
    throw DimensionMismatch("expected " + std::to_string(dim_) + " coordinates");
  }
  vectors_.push_back(v);
  signs_.push_back(0);
  resign_count_.push_back(-1);
  const int64_t t = size();
  const int64_t len = int64_t{1} << TwoAdicValuation(t);
  const int64_t begin = t - len;

  std::vector<std::vector<double>> block(vectors_.begin() + begin, vectors_.end());
  std::vector<int> fresh = signer_->Sign(block, dim_);
  if (static_cast<int64_t>(fresh.size()) != len) throw NumericalFailure("signer size mismatch");

  for (int64_t i = begin; i < t; ++i) {
    int s = fresh[i - begin];
    if (s != 1 && s != -1) throw NumericalFailure("signer returned a non-sign");
    if (signs_[i] != 0) {
      if (signs_[i] != s) {
        ++sign_changes_;
        for (int c = 0; c < dim_; ++c) sum_[c] += 2.0 * s * vectors_[i][c];
      }
    } else {
      for (int c = 0; c < dim_; ++c) sum_[c] += s * vectors_[i][c];
    }
    signs_[i] = s;
    ++resign_count_[i];
  }
  total_resigns_ += len - 1;

  ResignRange r{begin, t, SignedDiscrepancy(vectors_, signs_, dim_, begin, t)};
  max_call_disc_ = std::max(max_call_disc_, r.disc);
  while (!intervals_.empty() && intervals_.back().begin >= begin) intervals_.pop_back();
  intervals_.push_back({begin, len, r.disc});
  if (!IntervalsMatchBinary()) {
    throw InvariantViolation("intervals differ from the binary decomposition of " +
                             std::to_string(t));
  }
  return r;
}

bool DyadicResigner::IntervalsMatchBinary() const {
  const int64_t t = size();
  int64_t pos = 0;
  size_t k = 0;
  for (int bit = 62; bit >= 0; --bit) {
    if (!((t >> bit) & 1)) continue;
    if (k >= intervals_.size()) return false;
    if (intervals_[k].begin != pos || intervals_[k].length != (int64_t{1} << bit)) return false;
    pos += int64_t{1} << bit;
    ++k;
  }
  return k == intervals_.size();
}

int DyadicResigner::max_resign_count() const {
  int m = 0;
  for (int c : resign_count_) m = std::max(m, c);
  return m;
}

double DyadicResigner::Discrepancy() const {
  double worst = 0.0;
  for (double x : sum_) worst = std::max(worst, std::abs(x));
  return worst;
}

double DyadicResigner::RecomputeDiscrepancy() const {
  return SignedDiscrepancy(vectors_, signs_, dim_);
}

double DyadicResigner::PrefixBound() const {
  return max_call_disc_ * std::max(1, CeilLog2(size()));
}

}  // namespace dynbal
