#include "rtslearn/rtslearn.h"

#include "rtsl/errors.hpp"
#include "rtsl/highdim.hpp"
#include "rtsl/moments.hpp"
#include "rtsl/sim.hpp"

#include <json.hpp>

#include <exception>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

struct rts_config {
    rtsl::EconomyConfig config;
    std::string json;
};

struct rts_result {
    std::vector<std::string> names;
    std::vector<std::string> csv;
    std::string summary;
};

namespace {

thread_local std::string g_last_error;

rts_status fail(rts_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <class F>
rts_status guarded(F&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RTS_OK;
    } catch (const rtsl::ConfigError& e) {
        return fail(RTS_ERR_CONFIG, e.what());
    } catch (const rtsl::SolverError& e) {
        return fail(RTS_ERR_NUMERIC, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(RTS_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(RTS_ERR_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RTS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RTS_ERR_INTERNAL, e.what());
    }
}

std::unique_ptr<rts_result> make_result(const std::vector<rtsl::Table>& tables, std::string summary) {
    auto r = std::make_unique<rts_result>();
    for (const auto& t : tables) {
        r->names.push_back(t.name);
        r->csv.push_back(t.to_csv());
    }
    r->summary = std::move(summary);
    return r;
}

nlohmann::json number_array(const std::vector<double>& v) {
    auto a = nlohmann::json::array();
    for (double x : v) a.push_back(x);
    return a;
}

}  // namespace

extern "C" {

const char* rts_version(void) { return "1.0.0"; }

const char* rts_last_error(void) { return g_last_error.c_str(); }

rts_status rts_config_from_json(const char* json, rts_config** out) {
    if (!json || !out) return fail(RTS_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto c = std::make_unique<rts_config>();
        c->config = rtsl::config_from_json(json);
        c->json = rtsl::config_to_json(c->config);
        *out = c.release();
    });
}

void rts_config_free(rts_config* config) { delete config; }

rts_status rts_config_set_seed(rts_config* config, uint64_t seed) {
    if (!config) return fail(RTS_ERR_ARGUMENT, "null config");
    return guarded([&] {
        config->config.seed = seed;
        config->json = rtsl::config_to_json(config->config);
    });
}

rts_status rts_config_to_json(const rts_config* config, const char** out) {
    if (!config || !out) return fail(RTS_ERR_ARGUMENT, "null argument");
    *out = config->json.c_str();
    return RTS_OK;
}

rts_status rts_simulate(const rts_config* config, uint64_t replication, rts_result** out) {
    if (!config || !out) return fail(RTS_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        const rtsl::Trajectory tr = rtsl::run_trajectory(config->config, replication);
        nlohmann::json s;
        s["replication"] = replication;
        s["terminal_zeta"] = number_array(tr.terminal_zeta);
        *out = make_result({rtsl::trajectory_table(tr)}, s.dump(2)).release();
    });
}

rts_status rts_ensemble(const rts_config* config, int reps, int threads, rts_result** out) {
    if (!config || !out) return fail(RTS_ERR_ARGUMENT, "null argument");
    if (reps < 1) return fail(RTS_ERR_ARGUMENT, "reps must be >= 1");
    *out = nullptr;
    return guarded([&] {
        const rtsl::EnsembleStats st = rtsl::run_ensemble(config->config, reps, threads);
        nlohmann::json s;
        s["reps"] = reps;
        s["mean_abs_err"] = number_array(st.mean_abs_err);
        s["labor_share_mean"] = st.labor_share_mean;
        s["labor_share_sd"] = st.labor_share_sd;
        *out = make_result({rtsl::ensemble_table(st, config->config), rtsl::band_table(st)}, s.dump(2))
                   .release();
    });
}

rts_status rts_moments(const rts_config* config, rts_result** out) {
    if (!config || !out) return fail(RTS_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        const auto& c = config->config;
        const rtsl::MeanFieldPath mf = rtsl::mean_field_labor_path(c);
        rtsl::Table tb{"moments",
                       {"t", "sector", "w", "l", "z", "expected_zeta_next", "variance", "mode", "vbar",
                        "phibar"},
                       {}};
        for (std::size_t i = 0; i < c.sectors.size(); ++i) {
            const auto& p = c.sectors[i];
            const auto& z = mf.z[i];
            std::vector<double> e_pi;
            if (c.learning_mode == rtsl::LearningMode::PI) e_pi = rtsl::pi_expectation_path(z, p);
            double e_prev = p.zeta0;
            for (std::size_t t = 0; t < z.size(); ++t) {
                rtsl::MomentReport r;
                if (c.learning_mode == rtsl::LearningMode::PD) {
                    r = rtsl::pd_moments(std::span<const double>(z.data(), t + 1), p);
                } else {
                    // Centre the one-step law at the mean-field expectation.
                    r = rtsl::pi_moments(e_prev, z[t], p);
                    e_prev = e_pi[t];
                }
                tb.rows.push_back({std::to_string(t + 1), std::to_string(i + 1), rtsl::format_number(mf.wage[t]),
                                   rtsl::format_number(mf.labor[i][t]), rtsl::format_number(z[t]),
                                   rtsl::format_number(r.expectation), rtsl::format_number(r.variance),
                                   rtsl::format_number(r.mode), rtsl::format_number(r.vbar),
                                   rtsl::format_number(r.phibar)});
            }
        }
        nlohmann::json s;
        s["learning_mode"] = rtsl::to_string(c.learning_mode);
        s["path"] = "mean-field (shocks replaced by their mean)";
        *out = make_result({tb}, s.dump(2)).release();
    });
}

rts_status rts_scenario(const char* name, uint64_t seed, int reps, int threads, int horizon,
                        rts_result** out) {
    if (!name || !out) return fail(RTS_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        rtsl::ScenarioOptions o;
        o.seed = seed;
        o.reps = reps;
        o.threads = threads;
        o.horizon = horizon;
        const rtsl::ScenarioResult r = rtsl::run_scenario(name, o);
        *out = make_result(r.tables, r.summary_json).release();
    });
}

size_t rts_scenario_count(void) { return rtsl::scenario_names().size(); }

const char* rts_scenario_name(size_t index) {
    const auto& n = rtsl::scenario_names();
    return index < n.size() ? n[index].c_str() : nullptr;
}

rts_status rts_highdim(const char* json, int has_seed, uint64_t seed, rts_result** out) {
    if (!json || !out) return fail(RTS_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        rtsl::HighDimConfig hc = rtsl::highdim_config_from_json(json);
        if (has_seed) hc.seed = seed;
        const rtsl::HighDimTrace tr = rtsl::run_highdim(hc);
        rtsl::Table tb{"elasticity_trace", {"t", "firm", "input", "beta", "beta_star", "active"}, {}};
        for (std::size_t i = 0; i < tr.beta.size(); ++i)
            for (std::size_t t = 0; t < tr.beta[i].size(); ++t)
                for (Eigen::Index j = 0; j < tr.beta[i][t].size(); ++j)
                    tb.rows.push_back({std::to_string(t), std::to_string(i + 1), std::to_string(j + 1),
                                       rtsl::format_number(tr.beta[i][t](j)),
                                       rtsl::format_number(hc.params.beta_star(static_cast<Eigen::Index>(i), j)),
                                       tr.beta[i][t](j) > 0.0 ? "1" : "0"});
        *out = make_result({tb}, rtsl::highdim_config_to_json(hc)).release();
    });
}

size_t rts_result_count(const rts_result* result) { return result ? result->names.size() : 0; }

const char* rts_result_name(const rts_result* result, size_t index) {
    if (!result || index >= result->names.size()) return nullptr;
    return result->names[index].c_str();
}

const char* rts_result_csv(const rts_result* result, size_t index) {
    if (!result || index >= result->csv.size()) return nullptr;
    return result->csv[index].c_str();
}

const char* rts_result_summary_json(const rts_result* result) {
    return result ? result->summary.c_str() : nullptr;
}

void rts_result_free(rts_result* result) { delete result; }

}  // extern "C"
