#pragma once

#include "rtsl/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace rtsl {

double normal_cdf(double x);
double normal_sf(double x);  // 1 - cdf, without cancellation
double normal_pdf(double x);

struct MomentReport {
    double expectation = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double mode = 0.0;
    double vbar = 0.0;
    double phibar = 0.0;
    double Ftilde = 1.0;
    double ftilde = 0.0;
};

// How the per-period shocks enter the PD scale term. SharedShock reproduces
// the published closed form (scale proportional to sum z); IndependentShocks
// gives the exact scale for i.i.d. per-period shocks (proportional to sqrt(sum z^2)).
enum class NoiseModel { SharedShock, IndependentShocks };

// Moments and mode of (v + phi*e)^+ for e ~ N(0,1).
MomentReport truncated_gaussian_report(double v, double phi);

// True when the Gaussian bump dominates the atom at zero:
// |phi| sqrt(2 pi) F(-|v/phi|) <= 1.
bool psi_member(double v, double phi);

MomentReport pd_moments(std::span<const double> z_history, const SectorParams& p,
                        NoiseModel noise = NoiseModel::SharedShock);
double pd_mode(std::span<const double> z_history, const SectorParams& p);

MomentReport pi_moments(double zeta_t, double z, const SectorParams& p);
double pi_mode(double zeta_t, double z, const SectorParams& p);

struct LimitValue {
    enum class Kind { Finite, PosInf, NegInf };
    Kind kind = Kind::Finite;
    double value = 0.0;

    static LimitValue finite(double v) { return {Kind::Finite, v}; }
    static LimitValue pos_inf() { return {Kind::PosInf, 0.0}; }
    static LimitValue neg_inf() { return {Kind::NegInf, 0.0}; }
    bool is_finite() const { return kind == Kind::Finite; }
};

struct LimitDescriptor {
    LimitValue z1_limit;
    LimitValue z2_limit;
    std::optional<LimitValue> ratio_limit;  // needed when both sums diverge
    double abs_z1_over_z2 = 0.0;            // lim |z1|/z2, used by case 1
};

struct LimitResult {
    int case_label = 0;
    double value = 0.0;
    bool diverges = false;
};

LimitResult pd_limit_expectation(const LimitDescriptor& desc, const SectorParams& p);

struct PiLimit {
    double value = 0.0;
    bool partial = false;  // true when l -> 1 and the value uses the finite product
};

// l_limit: finite positive limit of l(t), or PosInf.
PiLimit pi_limit_expectation(LimitValue l_limit, std::span<const double> z_history,
                             const SectorParams& p);

struct ModeSequence {
    std::vector<double> vbar;              // vbar(1..T+1), vbar(1) = zeta0
    std::vector<bool> psi_membership;      // indicator per step
};

ModeSequence mode_sequence_pi(std::span<const double> z_schedule, const SectorParams& p);

struct MeanFieldPath {
    std::vector<double> wage;                 // per period
    std::vector<std::vector<double>> labor;   // [sector][t]
    std::vector<std::vector<double>> z;       // [sector][t]
    std::vector<std::vector<double>> zeta;    // belief used at t, [sector][t]
};

MeanFieldPath mean_field_labor_path(const EconomyConfig& config);

// E[zeta(t+1) | z(1..t)] for t = 1..T (PD closed form over growing prefixes).
std::vector<double> pd_expectation_path(std::span<const double> z, const SectorParams& p);

// Mean-field PI expectation iterated through the schedule: e(t+1) = E[(v(e(t)) + phi*e)^+].
std::vector<double> pi_expectation_path(std::span<const double> z, const SectorParams& p);

// Diagnostics only: guesses divergence of the partial sums from a log-log slope
// over the last 20% of the horizon. Finite data cannot certify limits.
LimitDescriptor classify_limits_heuristic(std::span<const double> z_history, const SectorParams& p);

}  // namespace rtsl
