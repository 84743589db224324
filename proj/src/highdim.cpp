#include "rtsl/highdim.hpp"
#include "rtsl/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rtsl {

namespace {

constexpr int kEnumerationLimit = 12;

Eigen::MatrixXd sub_matrix(const Eigen::MatrixXd& H, const std::vector<int>& idx) {
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) out(r, c) = H(idx[r], idx[c]);
    return out;
}

Eigen::VectorXd sub_vector(const Eigen::VectorXd& v, const std::vector<int>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) out(static_cast<Eigen::Index>(r)) = v(idx[r]);
    return out;
}

// Solves H(Omega) x = b(Omega); throws when the block is not positive definite.
Eigen::VectorXd solve_block(const Eigen::MatrixXd& H, const Eigen::VectorXd& b,
                            const std::vector<int>& idx) {
    if (idx.empty()) return {};
    const Eigen::LLT<Eigen::MatrixXd> llt(sub_matrix(H, idx));
    if (llt.info() != Eigen::Success)
        throw SolverError("high-dimensional MAP: active-set system is singular (identifiability failure)");
    return llt.solve(sub_vector(b, idx));
}

Eigen::VectorXd scatter(Eigen::Index n, const std::vector<int>& idx, const Eigen::VectorXd& x) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (std::size_t r = 0; r < idx.size(); ++r) out(idx[r]) = x(static_cast<Eigen::Index>(r));
    return out;
}

std::vector<int> support(const Eigen::VectorXd& beta) {
    std::vector<int> s;
    for (Eigen::Index j = 0; j < beta.size(); ++j)
        if (beta(j) > 0.0) s.push_back(static_cast<int>(j));
    return s;
}

QpSolution solve_enumeration(const Eigen::MatrixXd& H, const Eigen::VectorXd& b,
                             const Eigen::MatrixXd* H_inv) {
    const Eigen::Index n = b.size();
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * std::max(1.0, H.cwiseAbs().maxCoeff()) * scale;
    const std::uint64_t subsets = std::uint64_t{1} << n;

    bool found = false;
    double best_value = -std::numeric_limits<double>::infinity();
    QpSolution best;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        std::vector<int> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (mask & (std::uint64_t{1} << j)) idx.push_back(static_cast<int>(j));
        Eigen::VectorXd x;
        if (H_inv && static_cast<Eigen::Index>(idx.size()) == n)
            x = (*H_inv) * b;
        else
            x = solve_block(H, b, idx);
        if (x.size() > 0 && x.minCoeff() <= 0.0) continue;
        const Eigen::VectorXd beta = scatter(n, idx, x);
        const Eigen::VectorXd grad = H * beta - b;
        bool kkt = true;
        for (Eigen::Index j = 0; j < n && kkt; ++j)
            if (beta(j) == 0.0 && grad(j) < -tol) kkt = false;
        if (!kkt) continue;
        const double value = log_posterior_value(H, b, beta);
        const double tie = 1e-14 * std::max(1.0, std::abs(value));
        const bool better = !found || value > best_value + tie ||
                            (std::abs(value - best_value) <= tie && idx < best.active_set);
        if (better) {
            found = true;
            best_value = value;
            best = {beta, idx};
        }
    }
    if (!found) throw SolverError("high-dimensional MAP: no KKT-feasible active set found");
    return best;
}

// Lawson-Hanson style active-set method for the nonnegative quadratic program.
QpSolution solve_active_set(const Eigen::MatrixXd& H, const Eigen::VectorXd& b) {
    const Eigen::Index n = b.size();
    const double tol = 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff()) *
                       std::max(1.0, H.cwiseAbs().maxCoeff());
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    std::vector<int> P;
    const int max_outer = 10 * static_cast<int>(n) + 10;
    for (int outer = 0; outer < max_outer; ++outer) {
        const Eigen::VectorXd w = b - H * beta;
        int j_best = -1;
        double w_best = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::find(P.begin(), P.end(), static_cast<int>(j)) != P.end()) continue;
            if (w(j) > w_best) {
                w_best = w(j);
                j_best = static_cast<int>(j);
            }
        }
        if (j_best < 0) break;
        P.push_back(j_best);
        std::sort(P.begin(), P.end());
        for (int inner = 0; inner < 10 * static_cast<int>(n) + 10; ++inner) {
            const Eigen::VectorXd s = scatter(n, P, solve_block(H, b, P));
            bool positive = true;
            for (int i : P) positive = positive && s(i) > 0.0;
            if (positive) {
                beta = s;
                break;
            }
            double alpha = 1.0;
            for (int i : P)
                if (s(i) <= 0.0) alpha = std::min(alpha, beta(i) / (beta(i) - s(i)));
            beta += alpha * (s - beta);
            std::vector<int> keep;
            for (int i : P) {
                if (beta(i) > 1e-15 * std::max(1.0, beta.cwiseAbs().maxCoeff()))
                    keep.push_back(i);
                else
                    beta(i) = 0.0;
            }
            P = keep;
        }
    }
    for (Eigen::Index j = 0; j < n; ++j)
        if (beta(j) < 0.0) beta(j) = 0.0;
    return {beta, support(beta)};
}

}  // namespace

FirmElasticityParams ElasticityParams::firm(std::size_t i) const {
    const auto r = static_cast<Eigen::Index>(i);
    FirmElasticityParams f;
    f.beta_star = beta_star.row(r).transpose();
    f.beta0 = beta0.row(r).transpose();
    f.phi = phi;
    f.m = m(r);
    f.sigma = sigma(r);
    f.tau = tau(r);
    return f;
}

void validate(const FirmElasticityParams& p) {
    if (p.beta_star.size() != p.beta0.size() || p.beta0.size() == 0)
        throw std::invalid_argument("elasticity params: beta_star and beta0 must have equal non-zero length");
    if (!p.beta_star.allFinite() || !p.beta0.allFinite() || p.beta_star.minCoeff() < 0.0 ||
        p.beta0.minCoeff() < 0.0)
        throw std::invalid_argument("elasticity params: elasticities must be finite and >= 0");
    if (!(p.phi >= 0.0 && p.phi <= 1.0)) throw std::invalid_argument("elasticity params: phi must lie in [0,1]");
    if (!(p.sigma > 0.0) || !(p.tau > 0.0) || !std::isfinite(p.sigma) || !std::isfinite(p.tau) ||
        !std::isfinite(p.m))
        throw std::invalid_argument("elasticity params: sigma, tau must be finite and > 0");
}

Signal build_signal(const Eigen::VectorXd& y_row, double l, double phi, double eps,
                    const Eigen::VectorXd& beta_star, double sigma) {
    if (!(l > 0.0)) throw std::invalid_argument("build_signal: labor must be > 0");
    if (y_row.size() != beta_star.size()) throw std::invalid_argument("build_signal: size mismatch");
    if (y_row.size() > 0 && !(y_row.minCoeff() > 0.0))
        throw std::invalid_argument("build_signal: input quantities must be > 0");
    Signal sig;
    sig.z = phi * y_row.array().log().matrix();
    sig.s = sigma * eps + beta_star.dot(sig.z);
    return sig;
}

ElasticityState initial_elasticity_state(const FirmElasticityParams& p) {
    validate(p);
    const Eigen::Index n = p.beta0.size();
    const double t2 = p.tau * p.tau;
    ElasticityState st;
    st.beta = p.beta0;
    st.H = Eigen::MatrixXd::Identity(n, n) / t2;
    st.H_inv = Eigen::MatrixXd::Identity(n, n) * t2;
    st.b = p.beta0 / t2;
    st.active_set = support(p.beta0);
    return st;
}

double log_posterior_value(const Eigen::MatrixXd& H, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& beta) {
    return b.dot(beta) - 0.5 * beta.dot(H * beta);
}

bool kkt_certify(const Eigen::MatrixXd& H, const Eigen::VectorXd& b, const Eigen::VectorXd& beta,
                 double tol) {
    if (beta.size() > 0 && beta.minCoeff() < 0.0) return false;
    const Eigen::VectorXd grad = H * beta - b;
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta(j) > 0.0 && std::abs(grad(j)) > tol * scale) return false;
        if (beta(j) == 0.0 && grad(j) < -tol * scale) return false;
    }
    return true;
}

QpSolution solve_nonneg_map(const Eigen::MatrixXd& H, const Eigen::VectorXd& b, QpMethod method,
                            const Eigen::MatrixXd* H_inv) {
    if (H.rows() != H.cols() || H.rows() != b.size())
        throw std::invalid_argument("solve_nonneg_map: dimension mismatch");
    if (method == QpMethod::Auto)
        method = b.size() <= kEnumerationLimit ? QpMethod::Enumeration : QpMethod::ActiveSet;
    return method == QpMethod::Enumeration ? solve_enumeration(H, b, H_inv) : solve_active_set(H, b);
}

Eigen::MatrixXd sherman_morrison_step(const Eigen::MatrixXd& H_inv, const Eigen::VectorXd& z,
                                      double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sherman_morrison_step: sigma must be > 0");
    const Eigen::VectorXd u = H_inv * z;
    const double k = sigma * sigma + z.dot(u);
    if (!(k > 0.0)) throw SolverError("sherman_morrison_step: non-positive denominator");
    Eigen::MatrixXd out = H_inv - (u * u.transpose()) / k;
    return 0.5 * (out + out.transpose());
}

ElasticityState hd_map_update(const ElasticityState& state, const Eigen::VectorXd& z, double s,
                              const FirmElasticityParams& p, LearningMode memory, QpMethod method) {
    const Eigen::Index n = state.beta.size();
    if (z.size() != n) throw std::invalid_argument("hd_map_update: z has wrong length");
    if (!z.allFinite() || !std::isfinite(s)) throw std::invalid_argument("hd_map_update: non-finite signal");
    const double s2 = p.sigma * p.sigma, t2 = p.tau * p.tau;

    ElasticityState next = state;
    next.t += 1;
    if (memory == LearningMode::PD) {
        next.H += z * z.transpose() / s2;
        next.b += s * z / s2;
        if (++next.rank_one_steps >= kInverseRefreshPeriod) {
            next.H_inv = next.H.llt().solve(Eigen::MatrixXd::Identity(n, n));
            next.rank_one_steps = 0;
        } else {
            next.H_inv = sherman_morrison_step(state.H_inv, z, p.sigma);
        }
    } else {
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
        next.H = I / t2 + z * z.transpose() / s2;
        next.b = state.beta / t2 + s * z / s2;
        next.H_inv = sherman_morrison_step(I * t2, z, p.sigma);
        next.rank_one_steps = 1;
    }
    const QpSolution sol = solve_nonneg_map(next.H, next.b, method, &next.H_inv);
    next.beta = sol.beta;
    next.active_set = sol.active_set;
    return next;
}

Eigen::MatrixXd log_uniform_inputs(std::size_t n, int horizon, double spread, std::uint64_t seed,
                                   std::uint64_t firm, std::uint64_t replication) {
    // Stream ids above 2^32 keep input draws apart from the production shocks.
    const std::uint64_t stream = (std::uint64_t{1} << 32) + firm;
    Eigen::MatrixXd y(horizon, static_cast<Eigen::Index>(n));
    for (int t = 0; t < horizon; ++t)
        for (std::size_t j = 0; j < n; ++j) {
            const double u = uniform01(seed, stream, replication,
                                       static_cast<std::uint64_t>(t) * n + j);
            y(t, static_cast<Eigen::Index>(j)) = std::exp(spread * (2.0 * u - 1.0));
        }
    return y;
}

LimitCheck limit_diagonal_check(const FirmElasticityParams& base, int horizon, LimitParameter which,
                                const std::vector<double>& values, std::uint64_t seed) {
    validate(base);
    const Eigen::Index n = base.beta0.size();
    const Eigen::MatrixXd y = log_uniform_inputs(static_cast<std::size_t>(n), horizon, 1.0, seed, 0, 0);
    std::vector<double> eps(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) eps[static_cast<std::size_t>(t)] = standard_normal(seed, 0, 0, static_cast<std::uint64_t>(t));

    LimitCheck out;
    const double t2 = base.tau * base.tau;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    for (double v : values) {
        FirmElasticityParams p = base;
        bool prior_only = false;
        if (which == LimitParameter::Gamma) {
            if (!(v >= 0.0)) throw std::invalid_argument("limit_diagonal_check: gamma must be >= 0");
            if (v == 0.0) prior_only = true;
            else p.sigma = base.tau / std::sqrt(v);
        } else {
            if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("limit_diagonal_check: phi must lie in [0,1]");
            p.phi = v;
        }
        Eigen::MatrixXd H = I / t2;
        Eigen::VectorXd b = p.beta0 / t2;
        Eigen::VectorXd approx = p.beta0;
        const double g = prior_only ? 0.0 : p.gamma();
        for (int t = 0; t < horizon && !prior_only; ++t) {
            const Signal sig = build_signal(y.row(t).transpose(), 1.0, p.phi, eps[static_cast<std::size_t>(t)],
                                            p.beta_star, p.sigma);
            H += sig.z * sig.z.transpose() / (p.sigma * p.sigma);
            b += sig.s * sig.z / (p.sigma * p.sigma);
            approx += g * sig.s * sig.z;
        }
        const Eigen::MatrixXd Hinv = H.llt().solve(I);
        out.values.push_back(v);
        out.deviation.push_back((Hinv - t2 * I).cwiseAbs().maxCoeff());
        const QpSolution exact = solve_nonneg_map(H, b);
        out.approx_distance.push_back((approx.cwiseMax(0.0) - exact.beta).cwiseAbs().maxCoeff());
    }
    return out;
}

HighDimTrace run_highdim(const HighDimConfig& c, std::uint64_t replication) {
    const std::size_t n = c.params.firms();
    HighDimTrace tr;
    tr.beta.resize(n);
    tr.active.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FirmElasticityParams p = c.params.firm(i);
        const Eigen::MatrixXd y = log_uniform_inputs(n, c.horizon, c.log_input_spread, c.seed, i, replication);
        ElasticityState st = initial_elasticity_state(p);
        tr.beta[i].push_back(st.beta);
        tr.active[i].push_back(st.active_set);
        for (int t = 0; t < c.horizon; ++t) {
            const double eps = standard_normal(c.seed, i, replication, static_cast<std::uint64_t>(t));
            const Signal sig = build_signal(y.row(t).transpose(), 1.0, p.phi, eps, p.beta_star, p.sigma);
            st = hd_map_update(st, sig.z, sig.s, p, c.memory);
            tr.beta[i].push_back(st.beta);
            tr.active[i].push_back(st.active_set);
        }
    }
    return tr;
}

// ---- JSON ----

using nlohmann::json;

namespace {

Eigen::MatrixXd parse_matrix(const json& v, std::size_t n, const std::string& where) {
    if (!v.is_array() || v.size() != n) throw ConfigError(where + ": expected " + std::to_string(n) + " rows");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        if (!v[r].is_array() || v[r].size() != n)
            throw ConfigError(where + "[" + std::to_string(r) + "]: expected " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c) {
            if (!v[r][c].is_number()) throw ConfigError(where + ": entries must be numbers");
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r][c].get<double>();
        }
    }
    return M;
}

Eigen::VectorXd parse_per_firm(const json& doc, const char* key, double dflt, std::size_t n) {
    Eigen::VectorXd out = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), dflt);
    auto it = doc.find(key);
    if (it == doc.end()) return out;
    if (it->is_number()) return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), it->get<double>());
    if (!it->is_array() || it->size() != n)
        throw ConfigError(std::string(key) + ": expected a number or one value per firm");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(*it)[i].is_number()) throw ConfigError(std::string(key) + ": entries must be numbers");
        out(static_cast<Eigen::Index>(i)) = (*it)[i].get<double>();
    }
    return out;
}

}  // namespace

HighDimConfig highdim_config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("highdim config: top level must be an object");
    static const char* allowed[] = {"beta_star", "beta0", "phi", "m", "sigma", "tau",
                                    "horizon", "memory", "log_input_spread", "seed"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (std::find_if(std::begin(allowed), std::end(allowed),
                         [&](const char* k) { return it.key() == k; }) == std::end(allowed))
            throw ConfigError("highdim config: unknown key '" + it.key() + "'");
    if (!doc.contains("beta_star")) throw ConfigError("highdim config: missing required key 'beta_star'");
    const std::size_t n = doc["beta_star"].is_array() ? doc["beta_star"].size() : 0;
    if (n == 0) throw ConfigError("beta_star: expected a non-empty square matrix");

    HighDimConfig c;
    c.params.beta_star = parse_matrix(doc["beta_star"], n, "beta_star");
    c.params.beta0 = doc.contains("beta0") ? parse_matrix(doc["beta0"], n, "beta0")
                                           : Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n),
                                                                       static_cast<Eigen::Index>(n), 0.1);
    c.params.phi = doc.value("phi", 0.5);
    c.params.m = parse_per_firm(doc, "m", 0.0, n);
    c.params.sigma = parse_per_firm(doc, "sigma", 0.1, n);
    c.params.tau = parse_per_firm(doc, "tau", 0.1, n);
    if (doc.contains("horizon")) {
        if (!doc["horizon"].is_number_integer() || doc["horizon"].get<int>() < 1)
            throw ConfigError("horizon: expected a positive integer");
        c.horizon = doc["horizon"].get<int>();
    }
    if (doc.contains("memory")) {
        const std::string m = doc["memory"].is_string() ? doc["memory"].get<std::string>() : "";
        if (m == "PD") c.memory = LearningMode::PD;
        else if (m == "PI") c.memory = LearningMode::PI;
        else throw ConfigError("memory: expected \"PD\" or \"PI\"");
    }
    c.log_input_spread = doc.value("log_input_spread", 1.0);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    for (std::size_t i = 0; i < n; ++i) {
        try {
            validate(c.params.firm(i));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("firm " + std::to_string(i) + ": " + e.what());
        }
    }
    if (!(c.log_input_spread >= 0.0)) throw ConfigError("log_input_spread must be >= 0");
    return c;
}

std::string highdim_config_to_json(const HighDimConfig& c, int indent) {
    auto mat = [](const Eigen::MatrixXd& M) {
        json a = json::array();
        for (Eigen::Index r = 0; r < M.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(r, k));
            a.push_back(row);
        }
        return a;
    };
    auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    json doc;
    doc["beta_star"] = mat(c.params.beta_star);
    doc["beta0"] = mat(c.params.beta0);
    doc["phi"] = c.params.phi;
    doc["m"] = vec(c.params.m);
    doc["sigma"] = vec(c.params.sigma);
    doc["tau"] = vec(c.params.tau);
    doc["horizon"] = c.horizon;
    doc["memory"] = to_string(c.memory);
    doc["log_input_spread"] = c.log_input_spread;
    doc["seed"] = c.seed;
    return doc.dump(indent);
}

}  // namespace rtsl
