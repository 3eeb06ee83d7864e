#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace densecap {

// Mutable and read-only views over every parameter tensor of a model, in a
// fixed order. Models and their gradients share a shape, so views line up.
using TensorViews = std::vector<std::span<double>>;
using ConstTensorViews = std::vector<std::span<const double>>;

template <typename Derived>
std::span<double> view(Eigen::PlainObjectBase<Derived>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <typename Derived>
std::span<const double> view(const Eigen::PlainObjectBase<Derived>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

std::size_t total_size(const ConstTensorViews& views);
double global_norm(const ConstTensorViews& views);
bool all_finite(const ConstTensorViews& views);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 0.0;  // global gradient-norm clip; 0 disables
};

class Adam {
 public:
  Adam(AdamConfig config, std::size_t n_params);

  // One update. Gradients are clipped to config.clip_norm first when enabled.
  void step(const TensorViews& params, const ConstTensorViews& grads);

  const AdamConfig& config() const noexcept { return config_; }
  long steps() const noexcept { return t_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

}  // namespace densecap
