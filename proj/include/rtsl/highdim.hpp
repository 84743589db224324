#pragma once

#include "rtsl/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace rtsl {

// Parameters for one firm learning its row of input elasticities.
struct FirmElasticityParams {
    Eigen::VectorXd beta_star;
    Eigen::VectorXd beta0;
    double phi = 0.5;
    double m = 0.0;
    double sigma = 0.1;
    double tau = 0.1;

    double gamma() const { return (tau / sigma) * (tau / sigma); }
};

struct ElasticityParams {
    Eigen::MatrixXd beta_star;  // n x n, row i belongs to firm i
    Eigen::MatrixXd beta0;      // n x n prior locations
    double phi = 0.5;
    Eigen::VectorXd m, sigma, tau;  // per firm

    std::size_t firms() const { return static_cast<std::size_t>(beta_star.rows()); }
    FirmElasticityParams firm(std::size_t i) const;
};

void validate(const FirmElasticityParams& p);

struct ElasticityState {
    Eigen::VectorXd beta;
    Eigen::MatrixXd H;      // full precision matrix
    Eigen::MatrixXd H_inv;  // maintained inverse of H
    Eigen::VectorXd b;
    std::vector<int> active_set;  // indices with beta > 0, ascending
    int t = 0;
    int rank_one_steps = 0;  // since the last direct refresh
};

struct Signal {
    double s = 0.0;
    Eigen::VectorXd z;
};

Signal build_signal(const Eigen::VectorXd& y_row, double l, double phi, double eps,
                    const Eigen::VectorXd& beta_star, double sigma);

ElasticityState initial_elasticity_state(const FirmElasticityParams& p);

enum class QpMethod { Auto, Enumeration, ActiveSet };

struct QpSolution {
    Eigen::VectorXd beta;
    std::vector<int> active_set;
};

// argmax of -1/2 b'Hb + b'beta over beta >= 0 for symmetric positive definite H.
QpSolution solve_nonneg_map(const Eigen::MatrixXd& H, const Eigen::VectorXd& b,
                            QpMethod method = QpMethod::Auto,
                            const Eigen::MatrixXd* H_inv = nullptr);

double log_posterior_value(const Eigen::MatrixXd& H, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& beta);

// beta(Omega) > 0 and (H beta - b)_j >= -tol off Omega.
bool kkt_certify(const Eigen::MatrixXd& H, const Eigen::VectorXd& b, const Eigen::VectorXd& beta,
                 double tol = 1e-9);

ElasticityState hd_map_update(const ElasticityState& state, const Eigen::VectorXd& z, double s,
                              const FirmElasticityParams& p, LearningMode memory,
                              QpMethod method = QpMethod::Auto);

// Inverse of H + z z^T / sigma^2 from the inverse of H.
Eigen::MatrixXd sherman_morrison_step(const Eigen::MatrixXd& H_inv, const Eigen::VectorXd& z,
                                      double sigma);

constexpr int kInverseRefreshPeriod = 64;

enum class LimitParameter { Gamma, Phi };

struct LimitCheck {
    std::vector<double> values;          // gamma or phi sequence evaluated
    std::vector<double> deviation;       // max |H^-1 - tau^2 I|
    std::vector<double> approx_distance; // |limit form - exact MAP|_max
};

// Fixed log-uniform inputs and shocks drawn from `seed`; the chosen parameter
// is swept while everything else is held fixed. For Gamma, sigma = tau/sqrt(gamma)
// (gamma = 0 means prior-only precision).
LimitCheck limit_diagonal_check(const FirmElasticityParams& p, int horizon,
                                LimitParameter which, const std::vector<double>& values,
                                std::uint64_t seed);

// Log-uniform exogenous inputs: ln y ~ U(-spread, spread), one row per period.
Eigen::MatrixXd log_uniform_inputs(std::size_t n, int horizon, double spread, std::uint64_t seed,
                                   std::uint64_t firm, std::uint64_t replication);

struct HighDimConfig {
    ElasticityParams params;
    int horizon = 50;
    LearningMode memory = LearningMode::PD;
    double log_input_spread = 1.0;
    std::uint64_t seed = 1;
};

HighDimConfig highdim_config_from_json(const std::string& text);
std::string highdim_config_to_json(const HighDimConfig& c, int indent = 2);

struct HighDimTrace {
    // beta[firm][t] is the row estimate after t observations (t = 0..T).
    std::vector<std::vector<Eigen::VectorXd>> beta;
    std::vector<std::vector<std::vector<int>>> active;
};

HighDimTrace run_highdim(const HighDimConfig& c, std::uint64_t replication = 0);

}  // namespace rtsl
