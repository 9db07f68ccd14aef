#pragma once

#include "tmcts/errors.hpp"
#include "tmcts/rng.hpp"

namespace tmcts {

enum class Family { Bernoulli, Gaussian };

inline const char* to_string(Family f) { return f == Family::Bernoulli ? "bernoulli" : "gaussian"; }

// One-parameter exponential family shared by all leaves of a run:
// Bernoulli, or Gaussian with known variance.
class RewardModel {
public:
    static RewardModel bernoulli() { return RewardModel(Family::Bernoulli, 1.0); }
    static RewardModel gaussian(double sigma2) {
        if (!(sigma2 > 0)) throw DomainError("gaussian variance must be positive");
        return RewardModel(Family::Gaussian, sigma2);
    }
    static RewardModel make(Family f, double sigma2) {
        return f == Family::Bernoulli ? bernoulli() : gaussian(sigma2);
    }

    Family family() const { return family_; }
    double sigma2() const { return sigma2_; }

    // KL divergence d(x, y) between the family members with means x and y.
    // Bernoulli accepts x in [0,1] (empirical means may sit on the boundary)
    // and needs y interior unless x == y.
    double kl(double x, double y) const;

    // One reward draw with the given mean; deterministic given the stream.
    double sample(double mean, Rng& rng) const;

    // Model-mean domain X. Bernoulli: (0,1); Gaussian: all reals.
    bool mean_in_domain(double mean) const;
    // Closure of X, where empirical means live.
    bool mean_in_closure(double mean) const;
    // Throws DomainError unless theta lies in the interior of X.
    void require_interior(double theta) const;

private:
    RewardModel(Family f, double s2) : family_(f), sigma2_(s2) {}
    Family family_;
    double sigma2_;
};

}  // namespace tmcts
