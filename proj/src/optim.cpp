#include "emoaudionet/optim.hpp"

#include <cmath>

#include "emoaudionet/errors.hpp"

namespace emoaudionet::nn {

void adam_step(const std::vector<Parameter*>& params, const AdamConfig& config) {
    for (Parameter* p : params) {
        if (!p->grad_ready) {
            throw StateError("adam_step: parameter " + p->name + " has no gradient");
        }
    }
    for (Parameter* p : params) {
        p->step_count += 1;
        const double t = static_cast<double>(p->step_count);
        const double m_corr = 1.0 - std::pow(config.beta1, t);
        const double v_corr = 1.0 - std::pow(config.beta2, t);
        for (std::size_t i = 0; i < p->numel(); ++i) {
            const double g = p->grad[i];
            p->adam_m[i] = config.beta1 * p->adam_m[i] + (1.0 - config.beta1) * g;
            p->adam_v[i] = config.beta2 * p->adam_v[i] + (1.0 - config.beta2) * g * g;
            const double m_hat = p->adam_m[i] / m_corr;
            const double v_hat = p->adam_v[i] / v_corr;
            p->value[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
        }
        p->zero_grad();
    }
}

}  // namespace emoaudionet::nn
