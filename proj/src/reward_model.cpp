#include "tmcts/reward_model.hpp"

#include <cmath>
#include <string>

namespace tmcts {

double RewardModel::kl(double x, double y) const {
    if (family_ == Family::Gaussian) {
        const double gap = x - y;
        return gap * gap / (2.0 * sigma2_);
    }
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("bernoulli kl: x outside [0,1]");
    if (x == y) return 0.0;
    if (!(y > 0.0 && y < 1.0)) throw DomainError("bernoulli kl: divergence is infinite for boundary y");
    double v = 0.0;
    if (x > 0.0) v += x * std::log(x / y);
    if (x < 1.0) v += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
    return v;
}

double RewardModel::sample(double mean, Rng& rng) const {
    if (family_ == Family::Gaussian) return mean + std::sqrt(sigma2_) * rng.normal();
    if (!(mean >= 0.0 && mean <= 1.0)) throw DomainError("bernoulli sample: mean outside [0,1]");
    return rng.uniform() < mean ? 1.0 : 0.0;
}

bool RewardModel::mean_in_domain(double mean) const {
    if (family_ == Family::Gaussian) return std::isfinite(mean);
    return mean > 0.0 && mean < 1.0;
}

bool RewardModel::mean_in_closure(double mean) const {
    if (family_ == Family::Gaussian) return std::isfinite(mean);
    return mean >= 0.0 && mean <= 1.0;
}

void RewardModel::require_interior(double theta) const {
    if (!mean_in_domain(theta))
        throw DomainError("threshold " + std::to_string(theta) + " is not interior to the mean domain");
}

}  // namespace tmcts
