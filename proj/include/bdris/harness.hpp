#pragma once

#include "bdris/channel.hpp"
#include "bdris/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace bdris {

enum class SchemeId { BdrisOptRxx, BdrisIsoRxx, RisLos, RandomBdris, RandomRis, NoRis };

std::string_view to_string(SchemeId s);
/// Throws ConfigError for names outside the closed scheme set.
SchemeId parse_scheme(std::string_view name);
/// Comma separated names; duplicates and empty lists are rejected.
std::vector<SchemeId> parse_scheme_list(std::string_view csv);
std::vector<SchemeId> all_schemes();

enum class SweepKind { TransmitPower, RiceanFactor };

std::string_view sweep_variable_name(SweepKind k); // "pt_dbm" / "ricean_k"
SweepKind parse_sweep_kind(std::string_view name); // "pt" / "k"

struct SweepSpec {
    SweepKind kind = SweepKind::TransmitPower;
    std::vector<double> values;
};

struct SweepResult {
    SchemeId scheme;
    SweepKind sweep_var;
    double sweep_value;
    int trial;
    std::uint64_t seed; // the trial stream seed; rebuilds the channels exactly
    double rate_bits;
};

struct HarnessOptions {
    RiceanDesign ricean_design = RiceanDesign::DominantRank1;
    unsigned threads = 0;
};

/// Scenario with the sweep variable substituted.
ScenarioConfig at_sweep_point(const ScenarioConfig& cfg, SweepKind kind, double value);

/**
 * Rates of the requested schemes on one channel realization (common random
 * numbers: all schemes see the same channels). Returned in scheme order.
 */
std::vector<double> evaluate_trial(const ScenarioConfig& cfg, std::uint64_t stream_seed,
                                   const std::vector<SchemeId>& schemes, const HarnessOptions& opts = {});

/**
 * Monte Carlo sweep. Trial t of every sweep point uses the stream
 * trial_seed(cfg.seed, t). Rows are ordered by sweep point, scheme, trial,
 * independently of how trials were scheduled across threads.
 */
std::vector<SweepResult> run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep,
                                   const std::vector<SchemeId>& schemes, const HarnessOptions& opts = {});

struct SummaryRow {
    SchemeId scheme;
    SweepKind sweep_var;
    double sweep_value;
    std::size_t count;
    double mean;
    double std_error;
};

/// Mean and standard error per (scheme, sweep point), in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<SweepResult>& results);

/// header: scheme,sweep_var,sweep_value,trial,seed,rate_bits; 12 significant digits; LF.
void write_csv(std::ostream& out, const std::vector<SweepResult>& results);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::string format_number(double v);

} // namespace bdris
