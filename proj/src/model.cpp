#include "rtsl/model.hpp"
#include "rtsl/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtsl {

namespace {

bool finite(double x) { return std::isfinite(x); }

// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t rep,
                  std::uint64_t k, std::uint64_t lane) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ stream);
    h = mix64(h ^ rep);
    h = mix64(h ^ k);
    return mix64(h ^ lane);
}

// 53-bit uniform on the open interval (0, 1).
double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

void validate(const SectorParams& p) {
    if (!finite(p.zeta_star) || !finite(p.m) || !finite(p.sigma) || !finite(p.tau) ||
        !finite(p.zeta0) || !finite(p.zeta_lo) || !finite(p.zeta_hi))
        throw std::invalid_argument("sector parameters must be finite");
    if (!(p.zeta_lo > 0.0 && p.zeta_lo <= p.zeta_star && p.zeta_star <= p.zeta_hi &&
          p.zeta_hi < 1.0))
        throw std::invalid_argument("require 0 < zeta_lo <= zeta_star <= zeta_hi < 1");
    if (p.sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    if (!(p.tau > 0.0)) throw std::invalid_argument("tau must be > 0");
    if (p.zeta0 < 0.0) throw std::invalid_argument("zeta0 must be >= 0");
}

double Schedule::at(int t) const {
    switch (kind) {
    case Kind::Constant:
    case Kind::FractionOfSupply:
        return value;
    case Kind::LinearGrowth:
        return value + slope * static_cast<double>(t - 1);
    case Kind::Explicit:
        if (t < 1 || static_cast<std::size_t>(t) > values.size())
            throw std::out_of_range("explicit schedule has no entry for period " +
                                    std::to_string(t));
        return values[static_cast<std::size_t>(t - 1)];
    }
    return value;
}

Schedule Schedule::constant(double v) { return {Kind::Constant, v, 0.0, {}}; }
Schedule Schedule::linear(double first, double g) { return {Kind::LinearGrowth, first, g, {}}; }
Schedule Schedule::explicit_list(std::vector<double> v) {
    return {Kind::Explicit, 0.0, 0.0, std::move(v)};
}
Schedule Schedule::fraction(double f) { return {Kind::FractionOfSupply, f, 0.0, {}}; }

double EconomyConfig::l0_at(int t) const {
    if (l0.kind == Schedule::Kind::FractionOfSupply)
        return endogenous_labor ? 0.0 : l0.value * delta_at(t);
    return l0.at(t);
}

void validate(const EconomyConfig& c) {
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    if (c.sectors.empty()) throw ConfigError("sectors must be non-empty");
    for (std::size_t i = 0; i < c.sectors.size(); ++i) {
        try {
            validate(c.sectors[i]);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("sectors[" + std::to_string(i) + "]: " + e.what());
        }
    }
    if (c.horizon < 1) throw ConfigError("horizon must be a positive integer");
    auto check_len = [&](const Schedule& s, const char* name) {
        if (s.kind == Schedule::Kind::Explicit &&
            s.values.size() < static_cast<std::size_t>(c.horizon))
            throw ConfigError(std::string(name) + ": explicit list shorter than horizon");
    };
    check_len(c.labor_supply, "labor_supply");
    check_len(c.l0, "l0");
    if (c.endogenous_labor) {
        if (!(c.endogenous_labor->r > 1.0) || !finite(c.endogenous_labor->r))
            throw ConfigError("endogenous_labor.r must be > 1");
    }
    for (int t = 1; t <= c.horizon; ++t) {
        const double l0 = c.l0_at(t);
        if (!finite(l0) || l0 < 0.0)
            throw ConfigError("l0 must be finite and >= 0 (period " + std::to_string(t) + ")");
        if (!c.endogenous_labor) {
            const double d = c.delta_at(t);
            if (!finite(d) || !(d - l0 > 0.0))
                throw ConfigError("labor_supply - l0 must be > 0 (period " +
                                  std::to_string(t) + ")");
        }
    }
}

double lognormal_moment(double m, double sigma, double a) {
    if (!finite(m) || !finite(sigma) || !finite(a))
        throw std::invalid_argument("lognormal_moment: non-finite input");
    if (sigma < 0.0) throw std::invalid_argument("lognormal_moment: sigma < 0");
    return std::exp(a * m + 0.5 * a * a * sigma * sigma);
}

double mean_productivity(const SectorParams& p) { return lognormal_moment(p.m, p.sigma, 1.0); }

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t replication,
                 std::uint64_t k) {
    return to_open_unit(key(seed, stream, replication, k, 0));
}

double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t replication,
                       std::uint64_t k) {
    // Box-Muller on two independent lanes of the same counter.
    const double u1 = to_open_unit(key(seed, stream, replication, k, 1));
    const double u2 = to_open_unit(key(seed, stream, replication, k, 2));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ShockDraw ShockStream::at(std::uint64_t k) const {
    const double eps = m_ + sigma_ * standard_normal(seed_, sector_, rep_, k);
    return {std::exp(eps), eps};
}

ShockStream shock_stream(std::uint64_t seed, std::size_t sector_index,
                         std::size_t replication_index, const SectorParams& p) {
    return ShockStream(seed, sector_index, replication_index, p.m, p.sigma);
}

}  // namespace rtsl
