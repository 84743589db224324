#include "rtsl/sim.hpp"
#include "rtsl/belief.hpp"
#include "rtsl/equilibrium.hpp"
#include "rtsl/errors.hpp"
#include "rtsl/moments.hpp"
#include "parallel.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rtsl {

namespace {

double sample_sd(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

Trajectory run_trajectory(const EconomyConfig& c, std::uint64_t replication, const RunOptions& opt) {
    validate(c);
    const std::size_t n = c.sectors.size();
    if (!opt.fixed_beliefs.empty() && opt.fixed_beliefs.size() != n)
        throw std::invalid_argument("run_trajectory: fixed_beliefs needs one value per sector");

    std::vector<BeliefState> beliefs;
    std::vector<ShockStream> streams;
    for (std::size_t i = 0; i < n; ++i) {
        BeliefState b = initial_belief(c.sectors[i], c.learning_mode);
        if (!opt.fixed_beliefs.empty()) b.zeta = opt.fixed_beliefs[i];
        else if (!opt.learning) b.zeta = c.sectors[i].zeta_star;
        beliefs.push_back(b);
        streams.push_back(shock_stream(c.seed, i, replication, c.sectors[i]));
    }
    const bool frozen = !opt.learning || !opt.fixed_beliefs.empty();

    Trajectory tr;
    tr.records.reserve(static_cast<std::size_t>(c.horizon));
    std::vector<double> zhat(n);
    std::vector<ShockDraw> shocks(n);
    for (int t = 1; t <= c.horizon; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            zhat[i] = clamp_belief(beliefs[i].zeta, c.sectors[i]);
            shocks[i] = streams[i].at(static_cast<std::uint64_t>(t - 1));
        }
        EquilibriumOutcome eq;
        try {
            eq = c.endogenous_labor
                     ? clear_period_endogenous(c.sectors, zhat, shocks, c.endogenous_labor->r,
                                               c.l0_at(t), c.alpha)
                     : clear_period(c.sectors, zhat, shocks, c.delta_at(t), c.l0_at(t), c.alpha);
        } catch (const SolverError& e) {
            throw SolverError("period " + std::to_string(t) + ": " + e.what());
        }
        TrajectoryRecord rec;
        rec.t = t;
        rec.w = eq.w;
        rec.gdp = eq.gdp;
        rec.labor_share = eq.labor_share;
        rec.delta = eq.delta;
        rec.l0 = eq.l0;
        rec.residual = eq.residual;
        for (std::size_t i = 0; i < n; ++i) {
            rec.sectors.push_back({eq.labor[i], eq.output[i], eq.prices[i], beliefs[i].zeta, zhat[i]});
            if (!frozen) beliefs[i] = absorb(beliefs[i], eq.labor[i], eq.output[i], c.sectors[i]);
        }
        tr.records.push_back(std::move(rec));
    }
    for (const auto& b : beliefs) {
        tr.terminal_zeta.push_back(b.zeta);
        tr.pd_sum_zs.push_back(b.pd_sum_zs);
        tr.pd_sum_zz.push_back(b.pd_sum_zz);
    }
    return tr;
}

EnsembleStats run_ensemble(const EconomyConfig& c, int reps, int threads, const RunOptions& opt) {
    if (reps < 1) throw std::invalid_argument("run_ensemble: reps must be >= 1");
    validate(c);
    const std::size_t n = c.sectors.size();
    const auto T = static_cast<std::size_t>(c.horizon);

    struct RepOut {
        std::vector<double> terminal;
        std::vector<std::vector<double>> zeta;  // [sector][t]
        double ls_mean = 0.0, ls_sd = 0.0;
    };
    std::vector<RepOut> out(static_cast<std::size_t>(reps));
    detail::parallel_for(reps, threads, [&](int r) {
        const Trajectory tr = run_trajectory(c, static_cast<std::uint64_t>(r), opt);
        RepOut& o = out[static_cast<std::size_t>(r)];
        o.terminal = tr.terminal_zeta;
        o.zeta.assign(n, std::vector<double>(T));
        std::vector<double> ls;
        for (std::size_t t = 0; t < T; ++t) {
            ls.push_back(tr.records[t].labor_share);
            for (std::size_t i = 0; i < n; ++i) o.zeta[i][t] = tr.records[t].sectors[i].zeta;
        }
        o.ls_mean = mean_of(ls);
        o.ls_sd = sample_sd(ls, o.ls_mean);
    });

    // Aggregation runs in replication order on one thread.
    EnsembleStats st;
    st.reps = reps;
    const double R = static_cast<double>(reps);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> term;
        double abs_err = 0.0;
        for (const auto& o : out) {
            term.push_back(o.terminal[i]);
            abs_err += std::abs(o.terminal[i] - c.sectors[i].zeta_star);
        }
        const double m = mean_of(term);
        st.mean_abs_err.push_back(abs_err / R);
        st.terminal_mean.push_back(m);
        st.terminal_sd.push_back(sample_sd(term, m));

        std::vector<double> bm(T), blo(T), bhi(T);
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<double> col;
            for (const auto& o : out) col.push_back(o.zeta[i][t]);
            const double cm = mean_of(col);
            const double se = sample_sd(col, cm) / std::sqrt(R);
            bm[t] = cm;
            blo[t] = cm - 1.96 * se;
            bhi[t] = cm + 1.96 * se;
        }
        st.band_mean.push_back(std::move(bm));
        st.band_lo.push_back(std::move(blo));
        st.band_hi.push_back(std::move(bhi));
    }
    double lm = 0.0, lsd = 0.0;
    for (const auto& o : out) {
        lm += o.ls_mean;
        lsd += o.ls_sd;
    }
    st.labor_share_mean = lm / R;
    st.labor_share_sd = lsd / R;
    return st;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
        os << '\n';
    }
    return os.str();
}

Table trajectory_table(const Trajectory& tr, const std::string& name) {
    Table tb{name, {"t", "sector", "w", "l", "x", "p", "zeta", "zeta_hat", "gdp", "labor_share"}, {}};
    for (const auto& r : tr.records)
        for (std::size_t i = 0; i < r.sectors.size(); ++i) {
            const auto& s = r.sectors[i];
            tb.rows.push_back({std::to_string(r.t), std::to_string(i + 1), format_number(r.w),
                               format_number(s.l), format_number(s.x), format_number(s.p),
                               format_number(s.zeta), format_number(s.zeta_hat),
                               format_number(r.gdp), format_number(r.labor_share)});
        }
    return tb;
}

Table ensemble_table(const EnsembleStats& st, const EconomyConfig& c, const std::string& name) {
    Table tb{name,
             {"sector", "reps", "zeta_star", "mean_abs_err", "terminal_mean", "terminal_sd",
              "labor_share_mean", "labor_share_sd"},
             {}};
    for (std::size_t i = 0; i < st.mean_abs_err.size(); ++i)
        tb.rows.push_back({std::to_string(i + 1), std::to_string(st.reps),
                           format_number(c.sectors[i].zeta_star), format_number(st.mean_abs_err[i]),
                           format_number(st.terminal_mean[i]), format_number(st.terminal_sd[i]),
                           format_number(st.labor_share_mean), format_number(st.labor_share_sd)});
    return tb;
}

Table band_table(const EnsembleStats& st, const std::string& name) {
    Table tb{name, {"t", "sector", "zeta_mean", "zeta_lo", "zeta_hi"}, {}};
    if (st.band_mean.empty()) return tb;
    const std::size_t T = st.band_mean.front().size();
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < st.band_mean.size(); ++i)
            tb.rows.push_back({std::to_string(t + 1), std::to_string(i + 1),
                               format_number(st.band_mean[i][t]), format_number(st.band_lo[i][t]),
                               format_number(st.band_hi[i][t])});
    return tb;
}

EconomyConfig example_config(LearningMode mode, double tau, double sigma, double zeta_star,
                             double zeta0, int horizon) {
    EconomyConfig c;
    c.alpha = 0.5;
    SectorParams p;
    p.zeta_star = zeta_star;
    p.m = 0.0;
    p.sigma = sigma;
    p.tau = tau;
    p.zeta0 = zeta0;
    c.sectors = {p};
    c.horizon = horizon;
    c.labor_supply = Schedule::constant(5.0 / 3.0);
    c.l0 = Schedule::fraction(0.1);
    c.learning_mode = mode;
    return c;
}

TableCell error_table_cell(LearningMode mode, double tau, double sigma, double zeta_star,
                           double zeta0, int horizon, int reps, std::uint64_t seed, int threads) {
    EconomyConfig c = example_config(mode, tau, sigma, zeta_star, zeta0, horizon);
    c.seed = seed;
    const MeanFieldPath mf = mean_field_labor_path(c);
    const SectorParams& p = c.sectors.front();
    const std::vector<double> e = mode == LearningMode::PD ? pd_expectation_path(mf.z.front(), p)
                                                           : pi_expectation_path(mf.z.front(), p);
    TableCell cell;
    cell.tau = tau;
    cell.sigma = sigma;
    cell.zeta_star = zeta_star;
    cell.zeta0 = zeta0;
    cell.expected_zeta = e.back();
    cell.expected_err = std::abs(e.back() - zeta_star);
    cell.reps = reps;
    if (reps > 0) {
        const EnsembleStats st = run_ensemble(c, reps, threads);
        cell.ensemble_mean = st.terminal_mean.front();
        cell.ensemble_se = st.terminal_sd.front() / std::sqrt(static_cast<double>(reps));
        cell.mean_abs_err = st.mean_abs_err.front();
    }
    return cell;
}

LaborShareSummary labor_share_summary(const EconomyConfig& c, int reps, int threads,
                                      const RunOptions& opt) {
    if (reps < 1) throw std::invalid_argument("labor_share_summary: reps must be >= 1");
    std::vector<std::vector<double>> series(static_cast<std::size_t>(reps));
    detail::parallel_for(reps, threads, [&](int r) {
        const Trajectory tr = run_trajectory(c, static_cast<std::uint64_t>(r), opt);
        for (const auto& rec : tr.records) series[static_cast<std::size_t>(r)].push_back(rec.labor_share);
    });
    LaborShareSummary s;
    for (const auto& ls : series) {
        const double m = mean_of(ls);
        s.mean += m;
        s.sd += sample_sd(ls, m);
        s.pooled.insert(s.pooled.end(), ls.begin(), ls.end());
    }
    s.mean /= reps;
    s.sd /= reps;
    return s;
}

}  // namespace rtsl
