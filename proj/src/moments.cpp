#include "rtsl/moments.hpp"
#include "rtsl/belief.hpp"
#include "rtsl/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtsl {

namespace {

double inv_gamma(const SectorParams& p) { return (p.sigma / p.tau) * (p.sigma / p.tau); }

struct Sums {
    double s1 = 0.0, s2 = 0.0;
};

Sums sums(std::span<const double> z) {
    Sums s;
    for (double x : z) {
        if (!std::isfinite(x)) throw std::invalid_argument("moments: non-finite z in history");
        s.s1 += x;
        s.s2 += x * x;
    }
    return s;
}

// Least-squares slope of log|y| on log t over the final fifth of the series.
double tail_slope(const std::vector<double>& y) {
    const std::size_t n = y.size();
    const std::size_t start = n - std::max<std::size_t>(2, n / 5);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = start; i < n; ++i) {
        const double a = std::abs(y[i]);
        if (a <= 0.0) continue;
        const double lx = std::log(static_cast<double>(i + 1)), ly = std::log(a);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++k;
    }
    if (k < 2) return 0.0;
    const double d = k * sxx - sx * sx;
    return d == 0.0 ? 0.0 : (k * sxy - sx * sy) / d;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

bool psi_member(double v, double phi) {
    if (phi == 0.0) return true;
    const double a = std::abs(phi);
    return a * std::sqrt(2.0 * std::numbers::pi) * normal_cdf(-std::abs(v / a)) <= 1.0;
}

MomentReport truncated_gaussian_report(double v, double phi) {
    MomentReport r;
    r.vbar = v;
    r.phibar = phi;
    const double a = std::abs(phi);
    if (a == 0.0) {
        // Point mass at v; the ratio -|v/phi| is taken as -infinity.
        r.Ftilde = 1.0;
        r.ftilde = 0.0;
        r.expectation = std::max(v, 0.0);
        r.second_moment = r.expectation * r.expectation;
        r.variance = 0.0;
        r.mode = r.expectation;
        return r;
    }
    // c = v/|phi|; for v >= 0 this is the published 1 - F(-|v/phi|) form.
    const double c = v / a;
    r.Ftilde = normal_cdf(c);
    r.ftilde = normal_pdf(c);
    r.expectation = v * r.Ftilde + a * r.ftilde;
    r.second_moment = (v * v + a * a) * r.Ftilde + v * a * r.ftilde;
    r.variance = r.second_moment - r.expectation * r.expectation;
    r.mode = (v > 0.0 && psi_member(v, phi)) ? v : 0.0;
    return r;
}

MomentReport pd_moments(std::span<const double> z_history, const SectorParams& p, NoiseModel noise) {
    const Sums s = sums(z_history);
    const double ig = inv_gamma(p);
    const double den = ig + s.s2;
    if (den == 0.0) return truncated_gaussian_report(p.zeta0, 0.0);
    const double v = (ig * p.zeta0 + p.zeta_star * s.s2) / den;
    const double spread = noise == NoiseModel::SharedShock ? s.s1 : std::sqrt(s.s2);
    return truncated_gaussian_report(v, p.sigma * spread / den);
}

double pd_mode(std::span<const double> z_history, const SectorParams& p) {
    return pd_moments(z_history, p).mode;
}

MomentReport pi_moments(double zeta_t, double z, const SectorParams& p) {
    if (!std::isfinite(zeta_t) || !std::isfinite(z))
        throw std::invalid_argument("pi_moments: non-finite input");
    const double ig = inv_gamma(p);
    const double den = ig + z * z;
    if (den == 0.0) return truncated_gaussian_report(zeta_t, 0.0);
    // zeta* + (zeta - zeta*) a keeps zeta* an exact fixed point.
    const double v = p.zeta_star + (zeta_t - p.zeta_star) * (ig / den);
    return truncated_gaussian_report(v, p.sigma * z / den);
}

double pi_mode(double zeta_t, double z, const SectorParams& p) { return pi_moments(zeta_t, z, p).mode; }

LimitResult pd_limit_expectation(const LimitDescriptor& d, const SectorParams& p) {
    using K = LimitValue::Kind;
    const double g = p.gamma();
    if (d.z2_limit.kind == K::NegInf || (d.z2_limit.is_finite() && d.z2_limit.value < 0.0))
        throw std::invalid_argument("limit descriptor: z2 limit must be >= 0");
    const bool z1_fin = d.z1_limit.is_finite();
    const bool z2_fin = d.z2_limit.is_finite();

    if (z1_fin && z2_fin) {
        const double L1 = d.z1_limit.value, L2 = d.z2_limit.value;
        if (L1 == 0.0) return {2, (p.zeta0 + g * p.zeta_star * L2) / (1.0 + g * L2), false};
        const double v = (p.zeta0 + g * p.zeta_star * L2) / (1.0 + g * L2);
        const double phi = g * p.sigma * L1 / (1.0 + g * L2);
        return {2, truncated_gaussian_report(v, phi).expectation, false};
    }
    if (z1_fin && !z2_fin) {
        if (d.ratio_limit && d.ratio_limit->is_finite())
            throw std::invalid_argument("limit descriptor: finite z1 with divergent z2 forces an infinite ratio");
        return {3, p.zeta_star, false};
    }
    if (!z1_fin && z2_fin) return {4, INFINITY, true};

    if (!d.ratio_limit)
        throw std::invalid_argument("limit descriptor: ratio limit required when both sums diverge");
    if (d.ratio_limit->kind == K::PosInf) return {5, p.zeta_star, false};
    if (d.ratio_limit->kind == K::NegInf)
        throw std::invalid_argument("limit descriptor: ratio cannot tend to -infinity");
    if (!(d.abs_z1_over_z2 >= 0.0) || !std::isfinite(d.abs_z1_over_z2))
        throw std::invalid_argument("limit descriptor: |z1|/z2 limit must be finite and >= 0");
    const double L = std::abs(d.ratio_limit->value);
    return {1, p.zeta_star * normal_cdf(L) + p.sigma * normal_pdf(L) * d.abs_z1_over_z2, false};
}

PiLimit pi_limit_expectation(LimitValue l_limit, std::span<const double> z_history,
                             const SectorParams& p) {
    if (l_limit.kind == LimitValue::Kind::NegInf ||
        (l_limit.is_finite() && !(l_limit.value > 0.0)))
        throw std::invalid_argument("pi_limit_expectation: l limit must be positive or +infinity");
    if (!l_limit.is_finite() || l_limit.value != 1.0) return {p.zeta_star, false};
    const double g = p.gamma();
    double prod = 1.0;
    for (double z : z_history) prod *= 1.0 + g * z * z;
    return {p.zeta_star + (p.zeta0 - p.zeta_star) / prod, true};
}

ModeSequence mode_sequence_pi(std::span<const double> z_schedule, const SectorParams& p) {
    const double ig = inv_gamma(p);
    ModeSequence ms;
    ms.vbar.push_back(p.zeta0);
    for (double z : z_schedule) {
        if (!std::isfinite(z)) throw std::invalid_argument("mode_sequence_pi: non-finite z");
        const double v = ms.vbar.back();
        const double den = ig + z * z;
        const double a = den == 0.0 ? 1.0 : ig / den;
        const double next = a * v + (1.0 - a) * p.zeta_star;
        const double phi = den == 0.0 ? 0.0 : p.sigma * z / den;
        const bool member = psi_member(next, phi);
        ms.psi_membership.push_back(member);
        ms.vbar.push_back(member ? next : 0.0);
    }
    return ms;
}

MeanFieldPath mean_field_labor_path(const EconomyConfig& c) {
    validate(c);
    const std::size_t n = c.sectors.size();
    MeanFieldPath out;
    out.labor.assign(n, {});
    out.z.assign(n, {});
    out.zeta.assign(n, {});
    std::vector<BeliefState> beliefs;
    std::vector<ShockDraw> shocks;
    for (const auto& p : c.sectors) {
        beliefs.push_back(initial_belief(p, c.learning_mode));
        const double q = mean_productivity(p);
        shocks.push_back({q, std::log(q)});
    }
    std::vector<double> zhat(n);
    for (int t = 1; t <= c.horizon; ++t) {
        for (std::size_t i = 0; i < n; ++i) zhat[i] = clamp_belief(beliefs[i].zeta, c.sectors[i]);
        const EquilibriumOutcome eq =
            c.endogenous_labor
                ? clear_period_endogenous(c.sectors, zhat, shocks, c.endogenous_labor->r, c.l0_at(t), c.alpha)
                : clear_period(c.sectors, zhat, shocks, c.delta_at(t), c.l0_at(t), c.alpha);
        out.wage.push_back(eq.w);
        for (std::size_t i = 0; i < n; ++i) {
            out.labor[i].push_back(eq.labor[i]);
            out.z[i].push_back(std::log(eq.labor[i]));
            out.zeta[i].push_back(beliefs[i].zeta);
            beliefs[i] = absorb(beliefs[i], eq.labor[i], eq.output[i], c.sectors[i]);
        }
    }
    return out;
}

std::vector<double> pd_expectation_path(std::span<const double> z, const SectorParams& p) {
    std::vector<double> out;
    out.reserve(z.size());
    for (std::size_t t = 1; t <= z.size(); ++t) out.push_back(pd_moments(z.first(t), p).expectation);
    return out;
}

std::vector<double> pi_expectation_path(std::span<const double> z, const SectorParams& p) {
    std::vector<double> out;
    out.reserve(z.size());
    double e = p.zeta0;
    for (double zt : z) {
        e = pi_moments(e, zt, p).expectation;
        out.push_back(e);
    }
    return out;
}

LimitDescriptor classify_limits_heuristic(std::span<const double> z_history, const SectorParams& p) {
    if (z_history.size() < 10)
        throw std::invalid_argument("classify_limits_heuristic: need at least 10 observations");
    constexpr double kSlope = 0.05;
    const double g = p.gamma();
    std::vector<double> s1, s2, ratio;
    double a = 0.0, b = 0.0;
    for (double z : z_history) {
        a += z;
        b += z * z;
        s1.push_back(a);
        s2.push_back(b);
        ratio.push_back(a == 0.0 ? INFINITY : (p.zeta0 + g * p.zeta_star * b) / (g * p.sigma * a));
    }
    auto as_limit = [&](const std::vector<double>& y) {
        if (tail_slope(y) > kSlope) return y.back() < 0 ? LimitValue::neg_inf() : LimitValue::pos_inf();
        return LimitValue::finite(y.back());
    };
    LimitDescriptor d;
    d.z1_limit = as_limit(s1);
    d.z2_limit = as_limit(s2);
    if (std::isfinite(ratio.back())) d.ratio_limit = as_limit(ratio);
    else d.ratio_limit = LimitValue::pos_inf();
    d.abs_z1_over_z2 = b == 0.0 ? 0.0 : std::abs(a) / b;
    return d;
}

}  // namespace rtsl
