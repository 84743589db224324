#include "rtsl/highdim.hpp"
#include "rtsl/moments.hpp"
#include "rtsl/sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtsl {

using nlohmann::json;

namespace {

const std::vector<double> kGrid = {0.01, 0.05, 0.1};
const std::vector<std::pair<double, double>> kColumns = {{0.4, 0.1}, {0.4, 0.9}, {0.6, 0.1}, {0.6, 0.9}};

std::string fmt(double v) { return format_number(v); }

json preset_json(const EconomyConfig& c) { return json::parse(config_to_json(c)); }

ScenarioResult error_scenario(const std::string& name, LearningMode mode, int default_T,
                              const ScenarioOptions& o) {
    const int T = o.horizon > 0 ? o.horizon : default_T;
    ScenarioResult res;
    res.name = name;

    Table paths{"paths", {"t", "tau", "zeta0", "zeta_rep0", "zeta_expected", "zeta_ensemble_mean"}, {}};
    json path_presets = json::array();
    for (double tau : {0.1, 0.01})
        for (double z0 : {0.1, 0.9}) {
            EconomyConfig c = example_config(mode, tau, 0.1, 0.5, z0, T);
            c.seed = o.seed;
            path_presets.push_back(preset_json(c));
            const Trajectory tr = run_trajectory(c, 0);
            const EnsembleStats st = run_ensemble(c, o.reps, o.threads);
            const MeanFieldPath mf = mean_field_labor_path(c);
            const auto& p = c.sectors.front();
            // Belief held at t is the expectation given observations 1..t-1.
            std::vector<double> e = mode == LearningMode::PD ? pd_expectation_path(mf.z.front(), p)
                                                             : pi_expectation_path(mf.z.front(), p);
            e.insert(e.begin(), p.zeta0);
            for (int t = 1; t <= T; ++t) {
                const auto k = static_cast<std::size_t>(t - 1);
                paths.rows.push_back({std::to_string(t), fmt(tau), fmt(z0),
                                      fmt(tr.records[k].sectors[0].zeta), fmt(e[k]),
                                      fmt(st.band_mean[0][k])});
            }
        }
    res.tables.push_back(std::move(paths));

    Table cells{mode == LearningMode::PD ? "table1" : "table3",
                {"tau", "sigma", "zeta_star", "zeta0", "expected_abs_err", "expected_zeta",
                 "ensemble_mean_zeta", "ensemble_se", "ensemble_abs_err_of_mean", "mean_abs_err", "reps"},
                {}};
    for (double tau : kGrid)
        for (double sigma : kGrid)
            for (const auto& [zs, z0] : kColumns) {
                const TableCell cell = error_table_cell(mode, tau, sigma, zs, z0, T, o.reps, o.seed, o.threads);
                cells.rows.push_back({fmt(tau), fmt(sigma), fmt(zs), fmt(z0), fmt(cell.expected_err),
                                      fmt(cell.expected_zeta), fmt(cell.ensemble_mean), fmt(cell.ensemble_se),
                                      fmt(std::abs(cell.ensemble_mean - zs)), fmt(cell.mean_abs_err),
                                      std::to_string(cell.reps)});
            }
    res.tables.push_back(std::move(cells));

    json s;
    s["scenario"] = name;
    s["learning_mode"] = to_string(mode);
    s["horizon"] = T;
    s["reps"] = o.reps;
    s["seed"] = o.seed;
    s["labor_supply_note"] = "delta = 5/3 and l0 = delta/10, so the single sector always employs l = 1.5";
    s["path_presets"] = path_presets;
    res.summary_json = s.dump(2);
    return res;
}

Table histogram(const std::string& name, const std::vector<double>& learning,
                const std::vector<double>& perfect, int bins) {
    double lo = std::min(*std::min_element(learning.begin(), learning.end()),
                         *std::min_element(perfect.begin(), perfect.end()));
    double hi = std::max(*std::max_element(learning.begin(), learning.end()),
                         *std::max_element(perfect.begin(), perfect.end()));
    if (hi <= lo) hi = lo + 1e-12;
    const double width = (hi - lo) / bins;
    std::vector<long> a(static_cast<std::size_t>(bins)), b(static_cast<std::size_t>(bins));
    auto bin_of = [&](double v) {
        return static_cast<std::size_t>(std::clamp(static_cast<int>((v - lo) / width), 0, bins - 1));
    };
    for (double v : learning) ++a[bin_of(v)];
    for (double v : perfect) ++b[bin_of(v)];
    Table t{name, {"bin_lo", "bin_hi", "count_learning", "count_perfect_knowledge"}, {}};
    for (int k = 0; k < bins; ++k)
        t.rows.push_back({fmt(lo + k * width), fmt(lo + (k + 1) * width),
                          std::to_string(a[static_cast<std::size_t>(k)]),
                          std::to_string(b[static_cast<std::size_t>(k)])});
    return t;
}

ScenarioResult example2(const ScenarioOptions& o) {
    const int T = o.horizon > 0 ? o.horizon : 100;
    ScenarioResult res;
    res.name = "example2";
    Table summary{"table2",
                  {"zeta0", "learning_mean", "learning_sd", "perfect_mean", "perfect_sd", "reps", "horizon"},
                  {}};
    json presets = json::array();
    for (double z0 : {0.1, 0.5, 0.9}) {
        EconomyConfig c = example_config(LearningMode::PD, 0.01, 0.1, 0.5, z0, T);
        c.seed = o.seed;
        presets.push_back(preset_json(c));
        const LaborShareSummary learn = labor_share_summary(c, o.reps, o.threads);
        RunOptions pk;
        pk.learning = false;
        const LaborShareSummary perfect = labor_share_summary(c, o.reps, o.threads, pk);
        summary.rows.push_back({fmt(z0), fmt(learn.mean), fmt(learn.sd), fmt(perfect.mean),
                                fmt(perfect.sd), std::to_string(o.reps), std::to_string(T)});
        res.tables.push_back(histogram("histogram_zeta0_" + fmt(z0), learn.pooled, perfect.pooled, 40));
    }
    res.tables.push_back(std::move(summary));
    json s;
    s["scenario"] = "example2";
    s["statistic"] = "per-replication time-series mean and sample sd of w*delta/GDP, averaged over replications";
    s["reps"] = o.reps;
    s["seed"] = o.seed;
    s["presets"] = presets;
    res.summary_json = s.dump(2);
    return res;
}

ScenarioResult appendix_e(const ScenarioOptions& o) {
    const int T = o.horizon > 0 ? o.horizon : 100;
    ScenarioResult res;
    res.name = "appendixE";
    EconomyConfig c = example_config(LearningMode::PD, 0.1, 1.0, 0.5, 0.5, T);
    c.seed = o.seed;
    Table series{"wage_price", {"t", "zeta", "w", "p", "w_over_p"}, {}};
    Table summary{"wage_price_summary", {"zeta", "mean_w_over_p", "sd_w_over_p"}, {}};
    for (double z : {0.1, 0.5, 0.9}) {
        RunOptions opt;
        opt.fixed_beliefs = {z};
        const Trajectory tr = run_trajectory(c, 0, opt);
        std::vector<double> ratio;
        for (const auto& r : tr.records) {
            const double wp = r.w / r.sectors[0].p;
            ratio.push_back(wp);
            series.rows.push_back({std::to_string(r.t), fmt(z), fmt(r.w), fmt(r.sectors[0].p), fmt(wp)});
        }
        double m = 0.0;
        for (double v : ratio) m += v;
        m /= static_cast<double>(ratio.size());
        double ss = 0.0;
        for (double v : ratio) ss += (v - m) * (v - m);
        summary.rows.push_back({fmt(z), fmt(m), fmt(std::sqrt(ss / static_cast<double>(ratio.size() - 1)))});
    }
    res.tables.push_back(std::move(series));
    res.tables.push_back(std::move(summary));
    json s;
    s["scenario"] = "appendixE";
    s["preset"] = preset_json(c);
    s["fixed_beliefs"] = {0.1, 0.5, 0.9};
    res.summary_json = s.dump(2);
    return res;
}

ScenarioResult demography(const ScenarioOptions& o) {
    const int T = o.horizon > 0 ? o.horizon : 500;
    ScenarioResult res;
    res.name = "demography";
    EconomyConfig c = example_config(LearningMode::PD, 0.1, 0.1, 0.5, 0.1, T);
    c.labor_supply = Schedule::linear(11.0, 1.0);  // delta(t) = 10 + t
    c.seed = o.seed;
    const MeanFieldPath mf = mean_field_labor_path(c);
    const auto& p = c.sectors.front();
    const std::vector<double> e = pd_expectation_path(mf.z.front(), p);
    Table tb{"mean_field", {"t", "delta", "l", "z", "z1_sum", "z2_sum", "expected_zeta_next", "abs_err"}, {}};
    double s1 = 0.0, s2 = 0.0;
    for (int t = 1; t <= T; ++t) {
        const auto k = static_cast<std::size_t>(t - 1);
        const double z = mf.z.front()[k];
        s1 += z;
        s2 += z * z;
        tb.rows.push_back({std::to_string(t), fmt(c.delta_at(t)), fmt(mf.labor.front()[k]), fmt(z), fmt(s1),
                           fmt(s2), fmt(e[k]), fmt(std::abs(e[k] - p.zeta_star))});
    }
    res.tables.push_back(std::move(tb));
    res.tables.push_back(trajectory_table(run_trajectory(c, 0)));
    json s;
    s["scenario"] = "demography";
    s["preset"] = preset_json(c);
    res.summary_json = s.dump(2);
    return res;
}

ScenarioResult highdim_demo(const ScenarioOptions& o) {
    HighDimConfig hc;
    hc.params.beta_star.resize(3, 3);
    hc.params.beta_star << 0.3, 0.2, 0.1, 0.1, 0.4, 0.2, 0.2, 0.1, 0.3;
    hc.params.beta0 = Eigen::MatrixXd::Constant(3, 3, 0.1);
    hc.params.phi = 0.5;
    hc.params.m = Eigen::VectorXd::Zero(3);
    hc.params.sigma = Eigen::VectorXd::Constant(3, 0.1);
    hc.params.tau = Eigen::VectorXd::Constant(3, 0.5);
    hc.horizon = o.horizon > 0 ? o.horizon : 200;
    hc.seed = o.seed;

    ScenarioResult res;
    res.name = "highdim_demo";
    Table trace{"elasticity_trace", {"t", "memory", "firm", "input", "beta", "beta_star"}, {}};
    for (LearningMode mem : {LearningMode::PD, LearningMode::PI}) {
        hc.memory = mem;
        const HighDimTrace tr = run_highdim(hc);
        for (std::size_t i = 0; i < tr.beta.size(); ++i)
            for (std::size_t t = 0; t < tr.beta[i].size(); ++t)
                for (Eigen::Index j = 0; j < tr.beta[i][t].size(); ++j)
                    trace.rows.push_back({std::to_string(t), to_string(mem), std::to_string(i + 1),
                                          std::to_string(j + 1), fmt(tr.beta[i][t](j)),
                                          fmt(hc.params.beta_star(static_cast<Eigen::Index>(i), j))});
    }
    res.tables.push_back(std::move(trace));

    const LimitCheck lc = limit_diagonal_check(hc.params.firm(0), 20, LimitParameter::Gamma,
                                               {1.0, 1e-1, 1e-2, 1e-3, 0.0}, o.seed);
    Table lim{"limit_check", {"gamma", "max_dev_from_tau2_identity", "limit_form_distance"}, {}};
    for (std::size_t k = 0; k < lc.values.size(); ++k)
        lim.rows.push_back({fmt(lc.values[k]), fmt(lc.deviation[k]), fmt(lc.approx_distance[k])});
    res.tables.push_back(std::move(lim));

    hc.memory = LearningMode::PD;
    json s;
    s["scenario"] = "highdim_demo";
    s["preset"] = json::parse(highdim_config_to_json(hc));
    s["memories"] = {"PD", "PI"};
    res.summary_json = s.dump(2);
    return res;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"example1", "example2", "example4",
                                                   "appendixE", "demography", "highdim_demo"};
    return names;
}

ScenarioResult run_scenario(const std::string& name, const ScenarioOptions& o) {
    if (o.reps < 1) throw std::invalid_argument("scenario: reps must be >= 1");
    if (name == "example1") return error_scenario(name, LearningMode::PD, 500, o);
    if (name == "example4") return error_scenario(name, LearningMode::PI, 1000, o);
    if (name == "example2") return example2(o);
    if (name == "appendixE") return appendix_e(o);
    if (name == "demography") return demography(o);
    if (name == "highdim_demo") return highdim_demo(o);
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

}  // namespace rtsl
