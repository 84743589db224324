#include "rtsl/equilibrium.hpp"
#include "rtsl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace rtsl {

namespace {

constexpr int kMaxExpansions = 200;
constexpr int kMaxBisections = 400;
constexpr double kResidualTol = 1e-10;

void check_sizes(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

// Bisection on a monotone f with f(lo) and f(hi) of opposite sign.
// Stops when the midpoint no longer separates the endpoints.
struct Bisect {
    double lo, hi, w;
    int steps;
};

Bisect bisect(const std::function<double(double)>& f, double lo, double hi, double f_lo_sign) {
    int steps = 0;
    double w = 0.5 * (lo + hi);
    for (; steps < kMaxBisections; ++steps) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if ((hi - lo) <= 1e-15 * hi) break;
        const double fm = f(mid);
        if (!std::isfinite(fm)) throw SolverError("wage solver: non-finite value during bisection");
        if (fm == 0.0) {
            w = mid;
            return {lo, hi, w, steps};
        }
        if ((fm > 0.0) == (f_lo_sign > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    const double flo = std::abs(f(lo)), fhi = std::abs(f(hi));
    w = flo <= fhi ? lo : hi;
    return {lo, hi, w, steps};
}

}  // namespace

double labor_demand(const SectorParams& p, double zeta_hat, double alpha, double w) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("labor_demand: w must be > 0");
    if (!(zeta_hat >= p.zeta_lo && zeta_hat <= p.zeta_hi))
        throw std::invalid_argument("labor_demand: zeta_hat outside clamp bounds");
    const double e = lognormal_moment(p.m, p.sigma, alpha);
    return std::exp((std::log(e * zeta_hat) - std::log(w)) / (1.0 - zeta_hat * alpha));
}

double aggregate_labor_demand(std::span<const double> zeta_hat,
                              std::span<const SectorParams> params, double alpha, double w) {
    check_sizes(zeta_hat.size(), params.size(), "aggregate_labor_demand");
    double total = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i)
        total += labor_demand(params[i], zeta_hat[i], alpha, w);
    return total;
}

WageSolution solve_wage(std::span<const double> zeta_hat, std::span<const SectorParams> params,
                        double alpha, double target) {
    if (!(target > 0.0) || !std::isfinite(target))
        throw std::invalid_argument("solve_wage: target must be > 0");
    auto f = [&](double w) { return aggregate_labor_demand(zeta_hat, params, alpha, w) - target; };

    WageSolution out;
    double lo = 1.0, hi = 1.0;
    const double f1 = f(1.0);
    if (!std::isfinite(f1)) throw SolverError("solve_wage: non-finite labor demand at w = 1");
    if (f1 > 0.0) {
        while (true) {
            if (++out.expansions > kMaxExpansions)
                throw SolverError("solve_wage: bracket expansion failed");
            lo = hi;
            hi *= 2.0;
            const double fh = f(hi);
            if (!std::isfinite(fh)) throw SolverError("solve_wage: non-finite labor demand");
            if (fh <= 0.0) break;
        }
    } else {
        while (true) {
            if (++out.expansions > kMaxExpansions)
                throw SolverError("solve_wage: bracket expansion failed");
            hi = lo;
            lo *= 0.5;
            const double fl = f(lo);
            if (!std::isfinite(fl)) throw SolverError("solve_wage: non-finite labor demand");
            if (fl >= 0.0) break;
        }
    }
    const Bisect b = bisect(f, lo, hi, +1.0);
    out.w = b.w;
    out.lo = b.lo;
    out.hi = b.hi;
    out.bisections = b.steps;
    out.residual = std::abs(f(out.w));
    if (out.residual > kResidualTol * std::max(1.0, target))
        throw SolverError("solve_wage: residual " + std::to_string(out.residual) +
                          " exceeds tolerance");
    return out;
}

double labor_supply_endogenous(double w, double r) {
    if (!(r > 1.0)) throw std::invalid_argument("labor supply: r must be > 1");
    return std::pow(w / r, 1.0 / (r - 1.0));
}

EndogenousWage solve_wage_endogenous(std::span<const double> zeta_hat,
                                     std::span<const SectorParams> params, double alpha,
                                     double r, double l0) {
    if (!(r > 1.0) || !std::isfinite(r)) throw std::invalid_argument("solve_wage_endogenous: r must be > 1");
    if (!(l0 >= 0.0)) throw std::invalid_argument("solve_wage_endogenous: l0 must be >= 0");
    auto g = [&](double w) {
        return labor_supply_endogenous(w, r) - l0 - aggregate_labor_demand(zeta_hat, params, alpha, w);
    };

    double lo = 1.0, hi = 1.0;
    int expansions = 0;
    const double g1 = g(1.0);
    if (!std::isfinite(g1)) throw SolverError("solve_wage_endogenous: non-finite G at w = 1");
    if (g1 < 0.0) {
        do {
            if (++expansions > kMaxExpansions)
                throw SolverError("solve_wage_endogenous: bracket expansion failed");
            lo = hi;
            hi *= 2.0;
        } while (!(g(hi) > 0.0));
    } else if (g1 > 0.0) {
        do {
            if (++expansions > kMaxExpansions)
                throw SolverError("solve_wage_endogenous: bracket expansion failed");
            hi = lo;
            lo *= 0.5;
        } while (!(g(lo) < 0.0));
    } else {
        lo = 0.5;
        hi = 2.0;
    }
    const Bisect b = bisect(g, lo, hi, -1.0);

    EndogenousWage out;
    out.w = b.w;
    out.lo = b.lo;
    out.hi = b.hi;
    out.delta_star = labor_supply_endogenous(out.w, r);
    const double demand = aggregate_labor_demand(zeta_hat, params, alpha, out.w);
    out.residual = std::abs(out.delta_star - l0 - demand);
    if (out.residual > kResidualTol * std::max(1.0, demand))
        throw SolverError("solve_wage_endogenous: residual " + std::to_string(out.residual) +
                          " exceeds tolerance");
    return out;
}

EquilibriumOutcome assemble_outcome(std::span<const SectorParams> params,
                                    std::span<const double> zeta_hat,
                                    std::span<const ShockDraw> shocks, double w, double delta,
                                    double l0, double alpha) {
    const std::size_t n = params.size();
    check_sizes(zeta_hat.size(), n, "clear_period");
    check_sizes(shocks.size(), n, "clear_period");

    EquilibriumOutcome o;
    o.w = w;
    o.delta = delta;
    o.l0 = l0;
    o.labor.resize(n);
    o.prices.resize(n);
    o.output.resize(n);
    o.profit.resize(n);
    double labor_total = l0, profits = 0.0, spend = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = labor_demand(params[i], zeta_hat[i], alpha, w);
        const double x = shocks[i].eta * std::pow(l, params[i].zeta_star);
        const double p = std::pow(x, alpha - 1.0);
        o.labor[i] = l;
        o.output[i] = x;
        o.prices[i] = p;
        o.profit[i] = p * x - w * l;
        labor_total += l;
        profits += o.profit[i];
        spend += p * x;
    }
    o.residual = std::abs(labor_total - delta);
    o.profit0 = l0 * (1.0 - w);
    o.gdp = w * delta + o.profit0 + profits;
    o.labor_share = w * delta / o.gdp;
    // Quasi-linear budget: c0 = w*delta + profits - sum p_i c_i.
    o.consumption0 = w * delta + o.profit0 + profits - spend;
    return o;
}

EquilibriumOutcome clear_period(std::span<const SectorParams> params,
                                std::span<const double> zeta_hat,
                                std::span<const ShockDraw> shocks, double delta, double l0,
                                double alpha) {
    if (!(delta - l0 > 0.0)) throw std::invalid_argument("clear_period: delta - l0 must be > 0");
    const WageSolution ws = solve_wage(zeta_hat, params, alpha, delta - l0);
    return assemble_outcome(params, zeta_hat, shocks, ws.w, delta, l0, alpha);
}

EquilibriumOutcome clear_period_endogenous(std::span<const SectorParams> params,
                                           std::span<const double> zeta_hat,
                                           std::span<const ShockDraw> shocks, double r,
                                           double l0, double alpha) {
    const EndogenousWage ew = solve_wage_endogenous(zeta_hat, params, alpha, r, l0);
    return assemble_outcome(params, zeta_hat, shocks, ew.w, ew.delta_star, l0, alpha);
}

DemandCoefficients demand_coefficients(std::span<const SectorParams> params,
                                       std::span<const double> zeta_hat, double alpha) {
    check_sizes(zeta_hat.size(), params.size(), "demand_coefficients");
    DemandCoefficients dc;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double k = -1.0 / (1.0 - zeta_hat[i] * alpha);
        const double e = lognormal_moment(params[i].m, params[i].sigma, alpha);
        dc.kappa.push_back(k);
        dc.chi.push_back(std::pow(e * zeta_hat[i], -k));
    }
    return dc;
}

std::vector<ThresholdPair> labor_bounds_thresholds(std::span<const SectorParams> params,
                                                   std::span<const double> zeta_hat,
                                                   double alpha, double delta, double l0,
                                                   double lambda_min, double lambda_max) {
    if (!(lambda_min > 0.0) || !(lambda_max > 0.0))
        throw std::invalid_argument("labor_bounds_thresholds: lambda bounds must be > 0");
    const DemandCoefficients dc = demand_coefficients(params, zeta_hat, alpha);
    const double n = static_cast<double>(params.size());
    // Per-sector wage that would make sector j alone absorb an equal share.
    double w_max = -std::numeric_limits<double>::infinity();
    double w_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < params.size(); ++j) {
        const double wj = std::pow((delta - l0) / (n * dc.chi[j]), 1.0 / dc.kappa[j]);
        w_max = std::max(w_max, wj);
        w_min = std::min(w_min, wj);
    }
    std::vector<ThresholdPair> out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double e = lognormal_moment(params[i].m, params[i].sigma, alpha);
        const double ek = -1.0 / dc.kappa[i];
        out.push_back({w_max * std::pow(lambda_min, ek) / e, w_min * std::pow(lambda_max, ek) / e});
    }
    return out;
}

}  // namespace rtsl
