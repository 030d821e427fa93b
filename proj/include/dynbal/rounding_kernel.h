#ifndef DYNBAL_ROUNDING_KERNEL_H_
#define DYNBAL_ROUNDING_KERNEL_H_

#include <vector>

#include <Eigen/Dense>

namespace dynbal {

inline constexpr double kEpsClip = 1e-12;
inline constexpr double kEpsInt = 1e-9;

// Residual tolerance for a system with k columns.
inline double ResidualTolerance(int k) { return 1e-7 * (k > 0 ? k : 1); }

// n x k matrix whose columns are the vectors; entries clipped into [-1, 1].
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(Eigen::MatrixXd m);
  // columns[j] is the j-th vector; all must share one length.
  static DenseMatrix FromColumns(const std::vector<std::vector<double>>& columns,
                                 int rows = -1);

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  std::vector<double> Multiply(const std::vector<double>& x) const;

 private:
  Eigen::MatrixXd m_;
};

inline bool IsIntegral(double v) { return v >= 1.0 - kEpsInt || v <= -1.0 + kEpsInt; }

struct FractionalSigning {
  std::vector<double> values;
  std::vector<int> fractional;  // ascending

  FractionalSigning() = default;
  explicit FractionalSigning(std::vector<double> v);
  void RecomputeFractional();
};

enum class BasisRule {
  kRowBound,     // stop once at most n coordinates are fractional
  kIndependent,  // stop once the fractional columns are linearly independent
};

struct MoveOptions {
  BasisRule rule = BasisRule::kRowBound;
};

// Moves x within {y in [-1,1]^k : Ay = Ax} to a basic point.
FractionalSigning MoveToBasic(const DenseMatrix& a, const std::vector<double>& x,
                              const MoveOptions& options = {});

bool ResidualCheck(const DenseMatrix& a, const std::vector<double>& x,
                   const std::vector<double>& y, double tol);

double ResidualNorm(const DenseMatrix& a, const std::vector<double>& x,
                    const std::vector<double>& y);

}  // namespace dynbal

#endif  // DYNBAL_ROUNDING_KERNEL_H_
