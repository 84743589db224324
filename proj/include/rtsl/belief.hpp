#pragma once

#include "rtsl/model.hpp"

#include <cmath>
#include <span>

namespace rtsl {

struct BeliefState {
    double zeta = 0.0;  // stored MAP estimate, truncated at zero but not clamped
    LearningMode mode = LearningMode::PD;
    double pd_sum_zs = 0.0;
    double pd_sum_zz = 0.0;
    int history_len = 0;
};

struct UnifiedWeights {
    double a = 1.0;
    double gain = NAN;  // 1 - a without cancellation; NaN derives it from a
    double center = 0.0;
    double noise_sd = 0.0;
    double A_val = 0.0;
    double B_val = 0.0;
};

BeliefState initial_belief(const SectorParams& p, LearningMode mode);

double clamp_belief(double zeta, const SectorParams& p);

// Both updates work in precision form (sigma/tau)^2 so that sigma = 0 is the
// exact-signal limit rather than a division by zero.
BeliefState pd_update(const BeliefState& state, double z, double s, const SectorParams& p);
BeliefState pi_update(const BeliefState& state, double z, double s, const SectorParams& p);
BeliefState update(const BeliefState& state, double z, double s, const SectorParams& p);

// Observation in levels: z = ln l, s = ln x - m. Zero labor leaves the state unchanged.
BeliefState absorb(const BeliefState& state, double labor, double output, const SectorParams& p);

// PD ratio before truncation at zero.
double pd_raw_estimate(const BeliefState& state, const SectorParams& p);

double unified_weight_pd(double sum_zz_before, double z, const SectorParams& p);
double unified_weight_pi(double z, const SectorParams& p);
double unified_gain_pd(double sum_zz_before, double z, const SectorParams& p);
double unified_gain_pi(double z, const SectorParams& p);

// Weights for one step from `state` given the new regressor z and the
// decision-time belief/wage used to report A, B and sigma*.
UnifiedWeights unified_weights(const BeliefState& state, double z, const SectorParams& p,
                               double alpha, double zeta_hat, double w);

double unified_step(double zeta_t, const UnifiedWeights& weights, double eps_star);

// P(zeta(t) <= lower_bound | z history) for path-dependent learning with raw
// log-shocks eps ~ N(m, sigma^2) entering s = eps + zeta* z.
double rule_of_thumb_probability(const SectorParams& p, std::span<const double> z_history,
                                 double lower_bound);

}  // namespace rtsl
