#include "densecap/optim.hpp"

#include <cmath>

#include "densecap/errors.hpp"

namespace densecap {

std::size_t total_size(const ConstTensorViews& views) {
  std::size_t n = 0;
  for (const auto& v : views) n += v.size();
  return n;
}

double global_norm(const ConstTensorViews& views) {
  double s = 0.0;
  for (const auto& v : views) {
    for (double x : v) s += x * x;
  }
  return std::sqrt(s);
}

bool all_finite(const ConstTensorViews& views) {
  for (const auto& v : views) {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

Adam::Adam(AdamConfig config, std::size_t n_params) : config_(config), m_(n_params, 0.0), v_(n_params, 0.0) {}

void Adam::step(const TensorViews& params, const ConstTensorViews& grads) {
  if (params.size() != grads.size()) throw InternalError("Adam: parameter/gradient tensor count mismatch");
  if (!all_finite(grads)) throw NumericError("non-finite gradient");
  double scale = 1.0;
  if (config_.clip_norm > 0.0) {
    const double norm = global_norm(grads);
    if (norm > config_.clip_norm) scale = config_.clip_norm / norm;
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  std::size_t k = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != grads[i].size()) throw InternalError("Adam: tensor shape mismatch");
    for (std::size_t j = 0; j < params[i].size(); ++j, ++k) {
      if (k >= m_.size()) throw InternalError("Adam: more parameters than state");
      const double g = grads[i][j] * scale;
      m_[k] = config_.beta1 * m_[k] + (1.0 - config_.beta1) * g;
      v_[k] = config_.beta2 * v_[k] + (1.0 - config_.beta2) * g * g;
      const double mhat = m_[k] / bc1;
      const double vhat = v_[k] / bc2;
      params[i][j] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
    }
  }
  if (k != m_.size()) throw InternalError("Adam: fewer parameters than state");
}

}  // namespace densecap
