#ifndef ARCPARSE_ADAM_H_
#define ARCPARSE_ADAM_H_

#include <cstdint>
#include <stdexcept>

#include "arcparse/model.h"

namespace arcparse {

struct AdamConfig {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

// First and second moment estimates, shaped like the parameters.
struct AdamState {
  ModelParams m;
  ModelParams v;
  std::int64_t step = 0;

  static AdamState For(const ModelParams& params);
  bool operator==(const AdamState&) const = default;
};

class NonFiniteGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One bias-corrected Adam update. Throws NonFiniteGradient, naming the
// offending block, before touching anything if a gradient entry is NaN/Inf.
void AdamStep(ModelParams& params, const ModelParams& grads, AdamState& state,
              const AdamConfig& config = {});

}  // namespace arcparse

#endif  // ARCPARSE_ADAM_H_
