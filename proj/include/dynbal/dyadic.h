#ifndef DYNBAL_DYADIC_H_
#define DYNBAL_DYADIC_H_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace dynbal {

// Offline +-1 signer for a batch of vectors sharing one dimension.
class OfflineSigner {
 public:
  virtual ~OfflineSigner() = default;
  virtual std::vector<int> Sign(const std::vector<std::vector<double>>& vectors, int dim) = 0;
};

// Basic point from x = 0 (independent fractional columns), then rounding each
// fractional y to +1 with probability (1 + y) / 2.
class KernelSigner : public OfflineSigner {
 public:
  explicit KernelSigner(uint64_t seed) : rng_(seed) {}
  std::vector<int> Sign(const std::vector<std::vector<double>>& vectors, int dim) override;

 private:
  std::mt19937_64 rng_;
};

// l_inf norm of sum_i signs[i] * vectors[i].
double SignedDiscrepancy(const std::vector<std::vector<double>>& vectors,
                         const std::vector<int>& signs, int dim, size_t begin = 0,
                         size_t end = static_cast<size_t>(-1));

int TwoAdicValuation(int64_t t);

struct DyadicInterval {
  int64_t begin = 0;  // 0-based arrival index
  int64_t length = 0;
  double disc = 0.0;  // signer discrepancy on this block
};

struct ResignRange {
  int64_t begin = 0, end = 0;  // [begin, end)
  double disc = 0.0;
};

class DyadicResigner {
 public:
  DyadicResigner(int dim, std::unique_ptr<OfflineSigner> signer);
  DyadicResigner(int dim, uint64_t seed);

  ResignRange Insert(const std::vector<double>& v);

  int dim() const { return dim_; }
  int64_t size() const { return static_cast<int64_t>(vectors_.size()); }
  int sign(int64_t i) const { return signs_[i]; }
  const std::vector<int>& signs() const { return signs_; }
  // Re-signings after the first signing of each vector.
  const std::vector<int>& resign_counts() const { return resign_count_; }
  int max_resign_count() const;
  int64_t total_sign_changes() const { return sign_changes_; }
  int64_t total_resigns() const { return total_resigns_; }
  const std::vector<DyadicInterval>& intervals() const { return intervals_; }
  bool IntervalsMatchBinary() const;
  const std::vector<double>& signed_sum() const { return sum_; }
  double Discrepancy() const;
  // Largest per-call signer discrepancy so far.
  double max_interval_disc() const { return max_call_disc_; }
  // max_interval_disc * max(1, ceil(log2 t)).
  double PrefixBound() const;
  double RecomputeDiscrepancy() const;

 private:
  int dim_;
  std::unique_ptr<OfflineSigner> signer_;
  std::vector<std::vector<double>> vectors_;
  std::vector<int> signs_;
  std::vector<int> resign_count_;
  std::vector<DyadicInterval> intervals_;
  std::vector<double> sum_;
  double max_call_disc_ = 0.0;
  int64_t sign_changes_ = 0;
  int64_t total_resigns_ = 0;
};

int CeilLog2(int64_t t);

}  // namespace dynbal

#endif  // DYNBAL_DYADIC_H_
