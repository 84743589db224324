#pragma once

#include "rtsl/model.hpp"

#include <span>
#include <vector>

namespace rtsl {

struct EquilibriumOutcome {
    double w = 0.0;
    std::vector<double> labor;
    std::vector<double> prices;
    std::vector<double> output;
    std::vector<double> profit;
    double profit0 = 0.0;
    double delta = 0.0;  // supply used for the period (delta* when endogenous)
    double l0 = 0.0;
    double consumption0 = 0.0;  // numeraire budget residual, recorded only
    double gdp = 0.0;
    double labor_share = 0.0;
    double residual = 0.0;  // |sum l_i + l0 - delta|
};

struct DemandCoefficients {
    std::vector<double> kappa;
    std::vector<double> chi;
};

struct WageSolution {
    double w = 0.0;
    double lo = 0.0;  // final bracket, L(lo) >= target >= L(hi)
    double hi = 0.0;
    double residual = 0.0;
    int expansions = 0;
    int bisections = 0;
};

struct EndogenousWage {
    double w = 0.0;
    double delta_star = 0.0;
    double lo = 0.0;  // G(lo) < 0 < G(hi)
    double hi = 0.0;
    double residual = 0.0;
};

struct ThresholdPair {
    double lower = 0.0;  // zeta_hat >= lower  =>  l >= lambda_min
    double upper = 0.0;  // zeta_hat <= upper  =>  l <= lambda_max
};

double labor_demand(const SectorParams& p, double zeta_hat, double alpha, double w);

double aggregate_labor_demand(std::span<const double> zeta_hat,
                              std::span<const SectorParams> params, double alpha, double w);

// Unique w with L(w) = target. Bracket by doubling/halving from w = 1, then bisect.
WageSolution solve_wage(std::span<const double> zeta_hat, std::span<const SectorParams> params,
                        double alpha, double target);

// Root of G(w) = (w/r)^{1/(r-1)} - l0 - L(w).
EndogenousWage solve_wage_endogenous(std::span<const double> zeta_hat,
                                     std::span<const SectorParams> params, double alpha,
                                     double r, double l0);

double labor_supply_endogenous(double w, double r);

EquilibriumOutcome clear_period(std::span<const SectorParams> params,
                                std::span<const double> zeta_hat,
                                std::span<const ShockDraw> shocks, double delta, double l0,
                                double alpha);

EquilibriumOutcome clear_period_endogenous(std::span<const SectorParams> params,
                                           std::span<const double> zeta_hat,
                                           std::span<const ShockDraw> shocks, double r,
                                           double l0, double alpha);

// Prices, profits, GDP and labor share for a wage already found.
EquilibriumOutcome assemble_outcome(std::span<const SectorParams> params,
                                    std::span<const double> zeta_hat,
                                    std::span<const ShockDraw> shocks, double w, double delta,
                                    double l0, double alpha);

DemandCoefficients demand_coefficients(std::span<const SectorParams> params,
                                       std::span<const double> zeta_hat, double alpha);

std::vector<ThresholdPair> labor_bounds_thresholds(std::span<const SectorParams> params,
                                                   std::span<const double> zeta_hat,
                                                   double alpha, double delta, double l0,
                                                   double lambda_min, double lambda_max);

}  // namespace rtsl
