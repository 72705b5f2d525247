#include "arcparse/loss.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace arcparse {
namespace {

template <typename T>
double CrossEntropy(std::span<const T> probs, const TargetDistribution& target) {
  if (static_cast<int>(probs.size()) != target.num_classes()) {
    throw std::invalid_argument("probability vector has " + std::to_string(probs.size()) +
                                " entries, target has " +
                                std::to_string(target.num_classes()));
  }
  double loss = 0.0;
  for (int i : target.support()) {
    loss -= target[i] * std::log(std::max(static_cast<double>(probs[i]), kLogFloor));
  }
  return loss;
}

}  // namespace

TargetDistribution TargetDistribution::Uniform(int num_classes, std::span<const int> support) {
  if (support.empty()) throw std::invalid_argument("target support is empty");
  TargetDistribution target;
  target.probs_.assign(num_classes, 0.0);
  const double mass = 1.0 / static_cast<double>(support.size());
  for (int i : support) {
    if (i < 0 || i >= num_classes) {
      throw std::invalid_argument("target class " + std::to_string(i) + " out of range");
    }
    if (target.probs_[i] != 0.0) {
      throw std::invalid_argument("target class " + std::to_string(i) + " repeated");
    }
    target.probs_[i] = mass;
  }
  target.support_.assign(support.begin(), support.end());
  std::sort(target.support_.begin(), target.support_.end());
  return target;
}

TargetDistribution TargetDistribution::OneHot(int num_classes, int index) {
  const int support[] = {index};
  return Uniform(num_classes, support);
}

double SoftCrossEntropy(std::span<const double> probs, const TargetDistribution& target) {
  return CrossEntropy(probs, target);
}

double SoftCrossEntropy(std::span<const float> probs, const TargetDistribution& target) {
  return CrossEntropy(probs, target);
}

double Entropy(const TargetDistribution& target) {
  double h = 0.0;
  for (int i : target.support()) h -= target[i] * std::log(target[i]);
  return h;
}

}  // namespace arcparse
