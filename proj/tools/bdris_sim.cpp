// Command-line front end. Talks to the simulator only through the C API.
#include "bdris/bdris.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct ConfigDeleter {
    void operator()(bdris_config* c) const { bdris_config_free(c); }
};
struct ResultsDeleter {
    void operator()(bdris_results* r) const { bdris_results_free(r); }
};
struct AuditDeleter {
    void operator()(bdris_audit_report* r) const { bdris_audit_report_free(r); }
};

using ConfigPtr = std::unique_ptr<bdris_config, ConfigDeleter>;

int exit_code_for(bdris_status s)
{
    switch (s) {
    case BDRIS_OK: return kExitOk;
    case BDRIS_ERR_CONFIG:
    case BDRIS_ERR_GEOMETRY: return kExitConfig;
    default: return kExitFailure;
    }
}

int report(bdris_status s, const char* what)
{
    std::cerr << "bdris_sim: " << what << ": " << bdris_status_name(s) << ": " << bdris_last_error() << '\n';
    return exit_code_for(s);
}

bdris_status open_config(const std::string& path, ConfigPtr& out)
{
    bdris_config* raw = nullptr;
    const bdris_status s = path.empty() ? bdris_config_default(&raw) : bdris_config_load(path.c_str(), &raw);
    out.reset(raw);
    return s;
}

struct SimulateArgs {
    std::string config;
    std::string sweep;
    std::string out;
    std::string summary;
    std::optional<std::string> schemes;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

int simulate(const SimulateArgs& a)
{
    ConfigPtr cfg;
    if (auto s = open_config(a.config, cfg); s != BDRIS_OK) return report(s, "loading config");
    if (a.trials)
        if (auto s = bdris_config_set_trials(cfg.get(), *a.trials); s != BDRIS_OK) return report(s, "--trials");
    if (a.seed) bdris_config_set_seed(cfg.get(), *a.seed);
    if (a.threads) bdris_config_set_threads(cfg.get(), *a.threads);

    const bdris_sweep_kind kind = a.sweep == "pt" ? BDRIS_SWEEP_PT : BDRIS_SWEEP_K;
    bdris_results* raw = nullptr;
    const bdris_status s = bdris_run_sweep(cfg.get(), kind, a.schemes ? a.schemes->c_str() : nullptr, &raw);
    std::unique_ptr<bdris_results, ResultsDeleter> res(raw);
    if (s != BDRIS_OK) return report(s, "running sweep");

    if (auto w = bdris_results_write_csv(res.get(), a.out.c_str()); w != BDRIS_OK) return report(w, "writing CSV");
    if (!a.summary.empty())
        if (auto w = bdris_results_write_summary_csv(res.get(), a.summary.c_str()); w != BDRIS_OK)
            return report(w, "writing summary");
    std::cout << "wrote " << bdris_results_count(res.get()) << " rows to " << a.out << '\n';
    return kExitOk;
}

struct AuditArgs {
    bool quick = false;
    std::string config;
    std::uint64_t seed = 7;
    std::string inject = "none";
};

int audit(const AuditArgs& a)
{
    ConfigPtr cfg;
    if (auto s = open_config(a.config, cfg); s != BDRIS_OK) return report(s, "loading config");
    bdris_audit_injection inject = BDRIS_INJECT_NONE;
    if (a.inject == "asymmetric-theta") inject = BDRIS_INJECT_ASYMMETRIC_THETA;
    if (a.inject == "flipped-delta") inject = BDRIS_INJECT_FLIPPED_DELTA;

    bdris_audit_report* raw = nullptr;
    const bdris_status s = bdris_audit_run(cfg.get(), a.seed, a.quick ? 1 : 0, inject, &raw);
    std::unique_ptr<bdris_audit_report, AuditDeleter> rep(raw);
    if (s != BDRIS_OK) return report(s, "running audit");
    std::cout << bdris_audit_report_text(rep.get());
    return bdris_audit_report_passed(rep.get()) ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo rate simulator for BD-RIS assisted MIMO links"};
    app.set_version_flag("--version", std::string(bdris_version()));
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "run a seeded sweep and write per-trial rates as CSV");
    simulate_cmd->add_option("--config", sim.config, "JSON scenario config")->required()->check(CLI::ExistingFile);
    simulate_cmd->add_option("--sweep", sim.sweep, "sweep variable")->required()->check(CLI::IsMember({"pt", "k"}));
    simulate_cmd->add_option("--out", sim.out, "output CSV path")->required();
    simulate_cmd->add_option("--schemes", sim.schemes, "comma separated scheme list (default: all)");
    simulate_cmd->add_option("--trials", sim.trials, "trials per sweep point");
    simulate_cmd->add_option("--seed", sim.seed, "base seed");
    simulate_cmd->add_option("--threads", sim.threads, "worker threads (0: hardware concurrency)");
    simulate_cmd->add_option("--summary", sim.summary, "also write per-point mean and standard error");

    AuditArgs aud;
    auto* audit_cmd = app.add_subcommand("audit", "run the invariant suites and print a report");
    audit_cmd->add_flag("--quick", aud.quick, "reduced instance counts");
    audit_cmd->add_option("--config", aud.config, "JSON scenario config (default: built-in scenario)")
        ->check(CLI::ExistingFile);
    audit_cmd->add_option("--seed", aud.seed, "audit RNG seed");
    audit_cmd->add_option("--inject", aud.inject, "negative control")
        ->check(CLI::IsMember({"none", "asymmetric-theta", "flipped-delta"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (*simulate_cmd) return simulate(sim);
    return audit(aud);
}
