#include "bdris/harness.hpp"

#include "bdris/rate.hpp"
#include "bdris/scatter.hpp"
#include "bdris/txopt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

namespace bdris {

namespace {

constexpr std::uint64_t kSchemeStreamBase = 100;

struct SchemeName {
    SchemeId id;
    std::string_view name;
};

constexpr SchemeName kSchemes[] = {
    {SchemeId::BdrisOptRxx, "bdris-opt-rxx"}, {SchemeId::BdrisIsoRxx, "bdris-iso-rxx"},
    {SchemeId::RisLos, "ris-los"},             {SchemeId::RandomBdris, "random-bdris"},
    {SchemeId::RandomRis, "random-ris"},       {SchemeId::NoRis, "no-ris"},
};

// Everything a trial needs, with the closed-form designs built on first use.
class TrialContext {
public:
    TrialContext(const ScenarioConfig& cfg, std::uint64_t stream_seed, const HarnessOptions& opts)
        : base_(stream_seed),
          ch_(build_scenario_channels(cfg, base_)),
          p_t_(cfg.tx_power_w()),
          sigma_sq_(cfg.noise_power_w()),
          iso_(isotropic_covariance(cfg.n_t, p_t_))
    {
        if (const auto* los = std::get_if<LosFactors>(&ch_.ris_links)) {
            design_ = *los;
        } else {
            const auto& full = std::get<FullLinks>(ch_.ris_links);
            design_ = opts.ricean_design == RiceanDesign::DominantRank1
                          ? dominant_factors(full.backward, full.forward)
                          : full.los_component;
        }
    }

    double rate(SchemeId s)
    {
        switch (s) {
        case SchemeId::BdrisOptRxx: return optimized_rate(bdris_tilde());
        case SchemeId::BdrisIsoRxx: return isotropic_rate(bdris_tilde());
        case SchemeId::RisLos: return optimized_rate(diagonal_tilde());
        case SchemeId::RandomBdris: {
            Rng rng = scheme_rng(s);
            return achievable_rate(assemble_equivalent(ch_, random_feasible_bdris(ch_.m(), rng)), iso_, sigma_sq_);
        }
        case SchemeId::RandomRis: {
            Rng rng = scheme_rng(s);
            return achievable_rate(assemble_equivalent(ch_, random_diagonal_ris(ch_.m(), rng)), iso_, sigma_sq_);
        }
        case SchemeId::NoRis:
            return achievable_rate(ch_.direct, waterfilling(ch_.direct, sigma_sq_, p_t_), sigma_sq_);
        }
        throw ConfigError("unknown scheme");
    }

private:
    Rng scheme_rng(SchemeId s) const { return base_.split(kSchemeStreamBase + static_cast<std::uint64_t>(s)); }

    const ScatteringMatrix& bdris_tilde()
    {
        if (!bdris_) bdris_ = optimal_bdris(design_.f_d, design_.g_a, 0.0);
        return *bdris_;
    }

    const ScatteringMatrix& diagonal_tilde()
    {
        if (!diagonal_) diagonal_ = optimal_diagonal_ris(design_.f_d, design_.g_a, 0.0);
        return *diagonal_;
    }

    // Common phase from the design factors, applied to the realized channel.
    ScatteringMatrix phased(const ScatteringMatrix& tilde, const CMatrix& r_xx) const
    {
        const double phase = optimal_phase(ch_.direct, r_xx, sigma_sq_, design_.f_a, design_.g_d)
                             - coupling_of(tilde, design_.f_d, design_.g_a).theta;
        ScatteringMatrix theta = tilde;
        theta.entries *= std::polar(1.0, phase);
        return theta;
    }

    double isotropic_rate(const ScatteringMatrix& tilde) const
    {
        return achievable_rate(assemble_equivalent(ch_, phased(tilde, iso_.matrix)), iso_, sigma_sq_);
    }

    double optimized_rate(const ScatteringMatrix& tilde) const
    {
        if (ch_.pure_los()) return alternating_optimize(ch_, tilde, p_t_, sigma_sq_).trace.rates.back();
        // Ricean links: design once, then waterfill over the realized equivalent channel.
        const CMatrix h = assemble_equivalent(ch_, phased(tilde, iso_.matrix));
        return achievable_rate(h, waterfilling(h, sigma_sq_, p_t_), sigma_sq_);
    }

    Rng base_;
    ChannelSet ch_;
    double p_t_;
    double sigma_sq_;
    TxCovariance iso_;
    LosFactors design_;
    std::optional<ScatteringMatrix> bdris_;
    std::optional<ScatteringMatrix> diagonal_;
};

} // namespace

std::string_view to_string(SchemeId s)
{
    for (const auto& e : kSchemes)
        if (e.id == s) return e.name;
    return "unknown";
}

SchemeId parse_scheme(std::string_view name)
{
    for (const auto& e : kSchemes)
        if (e.name == name) return e.id;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::vector<SchemeId> parse_scheme_list(std::string_view csv)
{
    std::vector<SchemeId> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = std::min(csv.find(',', pos), csv.size());
        std::string_view item = csv.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.empty()) throw ConfigError("empty scheme name in list");
        const SchemeId id = parse_scheme(item);
        if (std::find(out.begin(), out.end(), id) != out.end())
            throw ConfigError("scheme '" + std::string(item) + "' listed twice");
        out.push_back(id);
        pos = comma + 1;
    }
    return out;
}

std::vector<SchemeId> all_schemes()
{
    std::vector<SchemeId> out;
    for (const auto& e : kSchemes) out.push_back(e.id);
    return out;
}

std::string_view sweep_variable_name(SweepKind k)
{
    return k == SweepKind::TransmitPower ? "pt_dbm" : "ricean_k";
}

SweepKind parse_sweep_kind(std::string_view name)
{
    if (name == "pt") return SweepKind::TransmitPower;
    if (name == "k") return SweepKind::RiceanFactor;
    throw ConfigError("sweep must be 'pt' or 'k', got '" + std::string(name) + "'");
}

ScenarioConfig at_sweep_point(const ScenarioConfig& cfg, SweepKind kind, double value)
{
    ScenarioConfig out = cfg;
    if (kind == SweepKind::TransmitPower) out.pt_dbm = value;
    else out.ricean_k = value;
    out.validate();
    return out;
}

std::vector<double> evaluate_trial(const ScenarioConfig& cfg, std::uint64_t stream_seed,
                                   const std::vector<SchemeId>& schemes, const HarnessOptions& opts)
{
    TrialContext ctx(cfg, stream_seed, opts);
    std::vector<double> rates;
    rates.reserve(schemes.size());
    for (SchemeId s : schemes) rates.push_back(ctx.rate(s));
    return rates;
}

std::vector<SweepResult> run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep,
                                   const std::vector<SchemeId>& schemes, const HarnessOptions& opts)
{
    cfg.validate();
    if (sweep.values.empty()) throw ConfigError("sweep grid is empty");
    if (schemes.empty()) throw ConfigError("no schemes selected");
    std::vector<ScenarioConfig> points;
    for (double v : sweep.values) points.push_back(at_sweep_point(cfg, sweep.kind, v));

    const std::size_t n_points = points.size();
    const std::size_t n_trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t n_schemes = schemes.size();
    const std::size_t n_units = n_points * n_trials;
    std::vector<double> rates(n_units * n_schemes);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t unit = next++; unit < n_units; unit = next++) {
            const std::size_t point = unit / n_trials;
            const std::size_t trial = unit % n_trials;
            try {
                const auto r = evaluate_trial(points[point], trial_seed(cfg.seed, trial), schemes, opts);
                std::copy(r.begin(), r.end(), rates.begin() + static_cast<std::ptrdiff_t>(unit * n_schemes));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n_units;
            }
        }
    };

    unsigned n_threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_units));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<SweepResult> out;
    out.reserve(rates.size());
    for (std::size_t p = 0; p < n_points; ++p)
        for (std::size_t s = 0; s < n_schemes; ++s)
            for (std::size_t t = 0; t < n_trials; ++t)
                out.push_back({schemes[s], sweep.kind, sweep.values[p], static_cast<int>(t),
                               trial_seed(cfg.seed, t), rates[(p * n_trials + t) * n_schemes + s]});
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<SweepResult>& results)
{
    if (results.empty()) throw DomainError("summarize: no results");
    struct Acc {
        std::size_t n = 0;
        double sum = 0.0;
        std::vector<double> values;
    };
    std::vector<std::pair<SchemeId, double>> order;
    std::map<std::pair<int, double>, Acc> acc;
    SweepKind kind = results.front().sweep_var;
    for (const auto& r : results) {
        const auto key = std::make_pair(static_cast<int>(r.scheme), r.sweep_value);
        auto [it, inserted] = acc.try_emplace(key);
        if (inserted) order.emplace_back(r.scheme, r.sweep_value);
        it->second.n++;
        it->second.sum += r.rate_bits;
        it->second.values.push_back(r.rate_bits);
    }

    std::vector<SummaryRow> out;
    for (const auto& [scheme, value] : order) {
        const Acc& a = acc.at({static_cast<int>(scheme), value});
        const double mean = a.sum / static_cast<double>(a.n);
        double se = 0.0;
        if (a.n > 1) {
            double ss = 0.0;
            for (double v : a.values) ss += (v - mean) * (v - mean);
            se = std::sqrt(ss / static_cast<double>(a.n - 1) / static_cast<double>(a.n));
        }
        out.push_back({scheme, kind, value, a.n, mean, se});
    }
    return out;
}

std::string format_number(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<SweepResult>& results)
{
    out << "scheme,sweep_var,sweep_value,trial,seed,rate_bits\n";
    for (const auto& r : results)
        out << to_string(r.scheme) << ',' << sweep_variable_name(r.sweep_var) << ',' << format_number(r.sweep_value)
            << ',' << r.trial << ',' << r.seed << ',' << format_number(r.rate_bits) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    out << "scheme,sweep_var,sweep_value,count,mean_rate_bits,stderr_bits\n";
    for (const auto& r : rows)
        out << to_string(r.scheme) << ',' << sweep_variable_name(r.sweep_var) << ',' << format_number(r.sweep_value)
            << ',' << r.count << ',' << format_number(r.mean) << ',' << format_number(r.std_error) << '\n';
}

} // namespace bdris
