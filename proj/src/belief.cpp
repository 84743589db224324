#include "rtsl/belief.hpp"
#include "rtsl/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtsl {

namespace {

double inv_gamma(const SectorParams& p) { return (p.sigma / p.tau) * (p.sigma / p.tau); }

void check_obs(double z, double s) {
    if (!std::isfinite(z) || !std::isfinite(s))
        throw std::invalid_argument("belief update: non-finite observation");
}

}  // namespace

BeliefState initial_belief(const SectorParams& p, LearningMode mode) {
    BeliefState b;
    b.zeta = p.zeta0;
    b.mode = mode;
    return b;
}

double clamp_belief(double zeta, const SectorParams& p) {
    return std::max(p.zeta_lo, std::min(p.zeta_hi, zeta));
}

double pd_raw_estimate(const BeliefState& s, const SectorParams& p) {
    const double ig = inv_gamma(p);
    const double den = ig + s.pd_sum_zz;
    if (den == 0.0) return p.zeta0;
    return (ig * p.zeta0 + s.pd_sum_zs) / den;
}

BeliefState pd_update(const BeliefState& state, double z, double s, const SectorParams& p) {
    if (state.mode != LearningMode::PD) throw std::invalid_argument("pd_update: state is not PD");
    check_obs(z, s);
    BeliefState next = state;
    next.pd_sum_zs += z * s;
    next.pd_sum_zz += z * z;
    next.history_len += 1;
    next.zeta = std::max(0.0, pd_raw_estimate(next, p));
    return next;
}

BeliefState pi_update(const BeliefState& state, double z, double s, const SectorParams& p) {
    if (state.mode != LearningMode::PI) throw std::invalid_argument("pi_update: state is not PI");
    check_obs(z, s);
    BeliefState next = state;
    next.history_len += 1;
    const double ig = inv_gamma(p);
    const double den = ig + z * z;
    if (den > 0.0) next.zeta = std::max(0.0, (ig * state.zeta + z * s) / den);
    return next;
}

BeliefState update(const BeliefState& state, double z, double s, const SectorParams& p) {
    return state.mode == LearningMode::PD ? pd_update(state, z, s, p) : pi_update(state, z, s, p);
}

BeliefState absorb(const BeliefState& state, double labor, double output, const SectorParams& p) {
    if (!std::isfinite(labor) || labor < 0.0)
        throw std::invalid_argument("absorb: labor must be finite and >= 0");
    if (labor == 0.0) return state;
    if (!(output > 0.0) || !std::isfinite(output))
        throw std::invalid_argument("absorb: output must be finite and > 0");
    return update(state, std::log(labor), std::log(output) - p.m, p);
}

double unified_weight_pd(double sum_zz_before, double z, const SectorParams& p) {
    if (z == 0.0) return 1.0;
    const double ig = inv_gamma(p);
    return (ig + sum_zz_before) / (ig + sum_zz_before + z * z);
}

double unified_weight_pi(double z, const SectorParams& p) {
    if (z == 0.0) return 1.0;
    const double ig = inv_gamma(p);
    return ig / (ig + z * z);
}

double unified_gain_pd(double sum_zz_before, double z, const SectorParams& p) {
    if (z == 0.0) return 0.0;
    return z * z / (inv_gamma(p) + sum_zz_before + z * z);
}

double unified_gain_pi(double z, const SectorParams& p) {
    if (z == 0.0) return 0.0;
    return z * z / (inv_gamma(p) + z * z);
}

UnifiedWeights unified_weights(const BeliefState& state, double z, const SectorParams& p,
                               double alpha, double zeta_hat, double w) {
    UnifiedWeights uw;
    uw.a = state.mode == LearningMode::PD ? unified_weight_pd(state.pd_sum_zz, z, p)
                                          : unified_weight_pi(z, p);
    uw.gain = state.mode == LearningMode::PD ? unified_gain_pd(state.pd_sum_zz, z, p)
                                             : unified_gain_pi(z, p);
    uw.center = p.zeta_star;
    // Reported as written; see README for the (1-u) vs (1-u*alpha) remark.
    uw.A_val = std::log(lognormal_moment(p.m, p.sigma, alpha)) / (1.0 - zeta_hat);
    uw.B_val = std::log(zeta_hat / w) / ((1.0 - zeta_hat) * alpha);
    const double denom = uw.A_val + uw.B_val;
    uw.noise_sd = denom == 0.0 ? INFINITY : (p.sigma / denom) * (p.sigma / denom);
    return uw;
}

double unified_step(double zeta_t, const UnifiedWeights& weights, double eps_star) {
    if (!(weights.a > 0.0 && weights.a <= 1.0))
        throw std::invalid_argument("unified_step: weight a must lie in (0,1]");
    if (weights.a == 1.0) return std::max(0.0, zeta_t);
    const double g = std::isnan(weights.gain) ? 1.0 - weights.a : weights.gain;
    return std::max(0.0, weights.a * zeta_t + g * eps_star);
}

double rule_of_thumb_probability(const SectorParams& p, std::span<const double> z_history,
                                 double lower_bound) {
    double s1 = 0.0, s2 = 0.0;
    for (double z : z_history) {
        if (!std::isfinite(z)) throw std::invalid_argument("rule_of_thumb_probability: non-finite z");
        s1 += z;
        s2 += z * z;
    }
    if (z_history.empty()) {
        // Prior N(zeta0, tau^2) truncated to [0, inf).
        const double keep = normal_cdf(p.zeta0 / p.tau);
        const double below = normal_cdf((lower_bound - p.zeta0) / p.tau) - normal_cdf(-p.zeta0 / p.tau);
        return std::clamp(below / keep, 0.0, 1.0);
    }
    if (s2 == 0.0) return p.zeta0 <= lower_bound ? 1.0 : 0.0;
    const double sig2 = p.sigma * p.sigma, tau2 = p.tau * p.tau;
    const double num = sig2 * (p.zeta0 - lower_bound) + tau2 * (p.zeta_star - lower_bound) * s2 +
                       p.m * tau2 * s1;
    const double den = p.sigma * tau2 * std::sqrt(s2);
    if (den == 0.0) return num > 0.0 ? 0.0 : 1.0;
    return normal_sf(num / den);
}

}  // namespace rtsl
