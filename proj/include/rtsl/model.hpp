#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rtsl {

enum class LearningMode { PD, PI };

struct SectorParams {
    double zeta_star = 0.5;
    double m = 0.0;
    double sigma = 0.1;
    double tau = 0.1;
    double zeta0 = 0.1;
    double zeta_lo = 0.05;
    double zeta_hi = 0.95;

    double gamma() const { return (tau / sigma) * (tau / sigma); }
};

// Throws std::invalid_argument when the invariants on SectorParams fail.
// sigma = 0 is accepted as the degenerate deterministic-shock case.
void validate(const SectorParams& p);

// Per-period schedule for delta(t) or l0(t), t = 1..T.
struct Schedule {
    enum class Kind { Constant, LinearGrowth, Explicit, FractionOfSupply };
    Kind kind = Kind::Constant;
    double value = 0.0;  // constant level, delta(1), or fraction
    double slope = 0.0;  // linear-growth increment per period
    std::vector<double> values;

    double at(int t) const;  // t is 1-based

    static Schedule constant(double v);
    static Schedule linear(double first, double slope);
    static Schedule explicit_list(std::vector<double> v);
    static Schedule fraction(double f);
};

struct EndogenousLabor {
    double r = 2.0;
};

struct EconomyConfig {
    double alpha = 0.5;
    std::vector<SectorParams> sectors;
    int horizon = 100;
    Schedule labor_supply = Schedule::constant(10.0);
    Schedule l0 = Schedule::fraction(0.1);
    LearningMode learning_mode = LearningMode::PD;
    std::optional<EndogenousLabor> endogenous_labor;
    std::uint64_t seed = 1;

    double delta_at(int t) const { return labor_supply.at(t); }
    // Resolves a fraction-of-supply l0 against delta(t); in endogenous mode a
    // fraction has no supply to scale and resolves to 0.
    double l0_at(int t) const;
};

void validate(const EconomyConfig& c);

// JSON (de)serialisation. Unknown keys raise ConfigError naming the field.
EconomyConfig config_from_json(const std::string& text);
std::string config_to_json(const EconomyConfig& c, int indent = 2);

struct ShockDraw {
    double eta;
    double eps;
};

// E[eta^a] for ln eta ~ N(m, sigma^2).
double lognormal_moment(double m, double sigma, double a);
// q = E[eta].
double mean_productivity(const SectorParams& p);

// Counter-based standard-normal generator. Draw k depends only on
// (seed, stream, replication, k), never on call order.
double standard_normal(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t replication, std::uint64_t k);
double uniform01(std::uint64_t seed, std::uint64_t stream,
                 std::uint64_t replication, std::uint64_t k);

class ShockStream {
public:
    ShockStream(std::uint64_t seed, std::uint64_t sector, std::uint64_t replication,
                double m, double sigma)
        : seed_(seed), sector_(sector), rep_(replication), m_(m), sigma_(sigma) {}

    ShockDraw at(std::uint64_t k) const;
    ShockDraw next() { return at(k_++); }

private:
    std::uint64_t seed_, sector_, rep_;
    double m_, sigma_;
    std::uint64_t k_ = 0;
};

ShockStream shock_stream(std::uint64_t seed, std::size_t sector_index,
                         std::size_t replication_index, const SectorParams& p);

inline const char* to_string(LearningMode m) { return m == LearningMode::PD ? "PD" : "PI"; }

}  // namespace rtsl
