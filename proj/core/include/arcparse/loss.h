#ifndef ARCPARSE_LOSS_H_
#define ARCPARSE_LOSS_H_

#include <span>
#include <vector>

namespace arcparse {

// Probability floor applied inside the logarithm.
inline constexpr double kLogFloor = 1e-12;

// Target distribution over classes: uniform mass 1/l on each of the l true
// classes, zero elsewhere. A single true class gives the one-hot target.
class TargetDistribution {
 public:
  // Throws std::invalid_argument for an empty, duplicated or out-of-range
  // support.
  static TargetDistribution Uniform(int num_classes, std::span<const int> support);
  static TargetDistribution OneHot(int num_classes, int index);

  const std::vector<double>& probs() const { return probs_; }
  const std::vector<int>& support() const { return support_; }
  int num_classes() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
  std::vector<int> support_;
};

// -sum_i target_i * log(max(probs_i, kLogFloor)).
double SoftCrossEntropy(std::span<const double> probs, const TargetDistribution& target);
double SoftCrossEntropy(std::span<const float> probs, const TargetDistribution& target);

// -sum_i target_i * log target_i; the minimum of SoftCrossEntropy over probs.
double Entropy(const TargetDistribution& target);

}  // namespace arcparse

#endif  // ARCPARSE_LOSS_H_
