#pragma once

#include <vector>

#include "magnet/tensor/tensor.hpp"

namespace magnet::tensor {

struct AdamConfig {
    double lr = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adam with bias correction. step() applies the update in registration
/// order and zeroes the gradients afterwards.
template <class T>
class Adam {
public:
    Adam(std::vector<Parameter<T>*> params, AdamConfig cfg = {})
        : params_(std::move(params)), cfg_(cfg) {
        m_.reserve(params_.size());
        v_.reserve(params_.size());
        for (auto* p : params_) {
            m_.emplace_back(p->value.size(), T(0));
            v_.emplace_back(p->value.size(), T(0));
        }
    }

    void step() {
        ++step_count_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, step_count_);
        const double bc2 = 1.0 - std::pow(cfg_.beta2, step_count_);
        for (std::size_t k = 0; k < params_.size(); ++k) {
            auto& p = *params_[k];
            auto& m = m_[k];
            auto& v = v_[k];
            for (std::size_t i = 0; i < p.value.size(); ++i) {
                const double g = static_cast<double>(p.grad[i]);
                const double mi =
                    cfg_.beta1 * static_cast<double>(m[i]) + (1.0 - cfg_.beta1) * g;
                const double vi = cfg_.beta2 * static_cast<double>(v[i]) +
                                  (1.0 - cfg_.beta2) * g * g;
                m[i] = static_cast<T>(mi);
                v[i] = static_cast<T>(vi);
                const double m_hat = mi / bc1;
                const double v_hat = vi / bc2;
                p.value[i] -= static_cast<T>(cfg_.lr * m_hat /
                                             (std::sqrt(v_hat) + cfg_.eps));
            }
            p.zero_grad();
        }
    }

    long step_count() const { return step_count_; }
    const AdamConfig& config() const { return cfg_; }

private:
    std::vector<Parameter<T>*> params_;
    AdamConfig cfg_;
    long step_count_ = 0;
    std::vector<std::vector<T>> m_;
    std::vector<std::vector<T>> v_;
};

}  // namespace magnet::tensor
