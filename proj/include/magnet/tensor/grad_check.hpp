#pragma once

#include <string>
#include <vector>

#include "magnet/tensor/tensor.hpp"

namespace magnet::tensor {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::string worst_param;
    long worst_index = -1;
    double analytic = 0.0;
    double numeric = 0.0;
};

/// Central-difference verification of reverse-mode gradients.
///
/// `build` constructs the loss from the current parameter values on a fresh
/// tape and must be deterministic. Every coordinate of every parameter is
/// perturbed by +-h. Relative error uses max(|analytic|, |numeric|, floor)
/// as the denominator so near-zero gradients are compared absolutely.
template <class T, class BuildFn>
GradCheckResult grad_check(BuildFn&& build, std::vector<Parameter<T>*> params,
                           T h = static_cast<T>(1e-5),
                           double denom_floor = 1e-4) {
    for (auto* p : params) p->zero_grad();
    std::vector<std::vector<T>> analytic;
    {
        Tape<T> tape;
        Tensor<T> loss = build(tape);
        tape.backward(loss);
        for (auto* p : params) analytic.push_back(p->grad);
        for (auto* p : params) p->zero_grad();
    }

    auto eval = [&]() -> T {
        Tape<T> tape;
        Tensor<T> loss = build(tape);
        return loss.item();
    };

    GradCheckResult result;
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& p = *params[k];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const T saved = p.value[i];
            p.value[i] = saved + h;
            const double f_plus = static_cast<double>(eval());
            p.value[i] = saved - h;
            const double f_minus = static_cast<double>(eval());
            p.value[i] = saved;

            const double numeric = (f_plus - f_minus) / (2.0 * static_cast<double>(h));
            const double a = static_cast<double>(analytic[k][i]);
            const double denom =
                std::max({std::abs(a), std::abs(numeric), denom_floor});
            const double rel = std::abs(a - numeric) / denom;
            if (rel > result.max_rel_error) {
                result.max_rel_error = rel;
                result.worst_param = p.name;
                result.worst_index = static_cast<long>(i);
                result.analytic = a;
                result.numeric = numeric;
            }
        }
    }
    return result;
}

}  // namespace magnet::tensor
