#include "bdris/bdris.h"

#include "bdris/audit.hpp"
#include "bdris/config.hpp"
#include "bdris/harness.hpp"
#include "bdris/rate.hpp"
#include "bdris/scatter.hpp"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

struct bdris_config {
    bdris::SimulationConfig cfg;
};

struct bdris_results {
    std::vector<bdris::SweepResult> rows;
};

struct bdris_audit_report {
    bdris::AuditReport report;
    std::string text;
};

namespace {

thread_local std::string g_last_error;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bdris_status fail(bdris_status s, const char* msg)
{
    g_last_error = msg;
    return s;
}

// Runs fn, translating the C++ error hierarchy into status codes.
template <class Fn>
bdris_status guarded(Fn&& fn)
{
    g_last_error.clear();
    try {
        fn();
        return BDRIS_OK;
    } catch (const bdris::ConfigError& e) {
        return fail(BDRIS_ERR_CONFIG, e.what());
    } catch (const bdris::DimensionError& e) {
        return fail(BDRIS_ERR_DIMENSION, e.what());
    } catch (const bdris::DomainError& e) {
        return fail(BDRIS_ERR_DOMAIN, e.what());
    } catch (const bdris::GeometryError& e) {
        return fail(BDRIS_ERR_GEOMETRY, e.what());
    } catch (const bdris::ContractError& e) {
        return fail(BDRIS_ERR_CONTRACT, e.what());
    } catch (const bdris::InvariantError& e) {
        return fail(BDRIS_ERR_INVARIANT, e.what());
    } catch (const IoError& e) {
        return fail(BDRIS_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(BDRIS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(BDRIS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BDRIS_ERR_INTERNAL, "unknown error");
    }
}

bdris::CVector read_vector(const double* p, std::size_t n)
{
    bdris::CVector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = {p[2 * i], p[2 * i + 1]};
    return v;
}

bdris::CMatrix read_matrix(const double* p, std::size_t rows, std::size_t cols)
{
    bdris::CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) {
            const std::size_t k = c * rows + r;
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {p[2 * k], p[2 * k + 1]};
        }
    return m;
}

template <class Write>
void write_file(const char* path, Write&& write)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
    write(out);
    out.flush();
    if (!out) throw IoError(std::string("write to '") + path + "' failed");
}

} // namespace

extern "C" {

const char* bdris_version(void) { return "0.1.0"; }

const char* bdris_last_error(void) { return g_last_error.c_str(); }

const char* bdris_status_name(bdris_status status)
{
    switch (status) {
    case BDRIS_OK: return "ok";
    case BDRIS_ERR_CONFIG: return "config error";
    case BDRIS_ERR_DIMENSION: return "dimension error";
    case BDRIS_ERR_DOMAIN: return "domain error";
    case BDRIS_ERR_GEOMETRY: return "geometry error";
    case BDRIS_ERR_CONTRACT: return "contract violation";
    case BDRIS_ERR_INVARIANT: return "invariant failure";
    case BDRIS_ERR_IO: return "i/o error";
    case BDRIS_ERR_NULL_ARGUMENT: return "null argument";
    case BDRIS_ERR_OUT_OF_RANGE: return "index out of range";
    case BDRIS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

bdris_status bdris_config_default(bdris_config** out)
{
    if (!out) return fail(BDRIS_ERR_NULL_ARGUMENT, "out is null");
    return guarded([&] { *out = new bdris_config{}; });
}

bdris_status bdris_config_load(const char* path, bdris_config** out)
{
    if (!path || !out) return fail(BDRIS_ERR_NULL_ARGUMENT, "path/out is null");
    return guarded([&] { *out = new bdris_config{bdris::load_config(path)}; });
}

bdris_status bdris_config_parse(const char* json_text, bdris_config** out)
{
    if (!json_text || !out) return fail(BDRIS_ERR_NULL_ARGUMENT, "json_text/out is null");
    return guarded([&] { *out = new bdris_config{bdris::parse_config(json_text)}; });
}

void bdris_config_free(bdris_config* cfg) { delete cfg; }

bdris_status bdris_config_set_trials(bdris_config* cfg, int32_t trials)
{
    if (!cfg) return fail(BDRIS_ERR_NULL_ARGUMENT, "cfg is null");
    if (trials < 1) return fail(BDRIS_ERR_CONFIG, "trials must be >= 1");
    cfg->cfg.scenario.trials = trials;
    return BDRIS_OK;
}

bdris_status bdris_config_set_seed(bdris_config* cfg, uint64_t seed)
{
    if (!cfg) return fail(BDRIS_ERR_NULL_ARGUMENT, "cfg is null");
    cfg->cfg.scenario.seed = seed;
    return BDRIS_OK;
}

bdris_status bdris_config_set_threads(bdris_config* cfg, uint32_t threads)
{
    if (!cfg) return fail(BDRIS_ERR_NULL_ARGUMENT, "cfg is null");
    cfg->cfg.threads = threads;
    return BDRIS_OK;
}

bdris_status bdris_config_to_json(const bdris_config* cfg, char* buf, size_t cap, size_t* len)
{
    if (!cfg || !len) return fail(BDRIS_ERR_NULL_ARGUMENT, "cfg/len is null");
    return guarded([&] {
        const std::string doc = bdris::to_json(cfg->cfg);
        *len = doc.size();
        if (buf && cap > 0) {
            const std::size_t n = std::min(cap - 1, doc.size());
            std::memcpy(buf, doc.data(), n);
            buf[n] = '\0';
        }
    });
}

bdris_status bdris_run_sweep(const bdris_config* cfg, bdris_sweep_kind kind, const char* schemes,
                             bdris_results** out)
{
    if (!cfg || !out) return fail(BDRIS_ERR_NULL_ARGUMENT, "cfg/out is null");
    return guarded([&] {
        // Scheme names are validated before any computation starts.
        const auto list = schemes ? bdris::parse_scheme_list(schemes) : bdris::all_schemes();
        bdris::SweepSpec spec;
        if (kind == BDRIS_SWEEP_PT) {
            spec.kind = bdris::SweepKind::TransmitPower;
            spec.values = cfg->cfg.pt_sweep_dbm;
        } else if (kind == BDRIS_SWEEP_K) {
            spec.kind = bdris::SweepKind::RiceanFactor;
            spec.values = cfg->cfg.k_sweep;
        } else {
            throw bdris::ConfigError("unknown sweep kind");
        }
        bdris::HarnessOptions opts;
        opts.ricean_design = cfg->cfg.ricean_design;
        opts.threads = cfg->cfg.threads;
        auto rows = bdris::run_sweep(cfg->cfg.scenario, spec, list, opts);
        *out = new bdris_results{std::move(rows)};
    });
}

void bdris_results_free(bdris_results* res) { delete res; }

size_t bdris_results_count(const bdris_results* res) { return res ? res->rows.size() : 0; }

bdris_status bdris_results_row(const bdris_results* res, size_t index, bdris_result_row* out)
{
    if (!res || !out) return fail(BDRIS_ERR_NULL_ARGUMENT, "res/out is null");
    if (index >= res->rows.size()) return fail(BDRIS_ERR_OUT_OF_RANGE, "row index out of range");
    const auto& r = res->rows[index];
    // Both names point at string literals with static storage.
    out->scheme = bdris::to_string(r.scheme).data();
    out->sweep_var = bdris::sweep_variable_name(r.sweep_var).data();
    out->sweep_value = r.sweep_value;
    out->trial = r.trial;
    out->seed = r.seed;
    out->rate_bits = r.rate_bits;
    return BDRIS_OK;
}

bdris_status bdris_results_write_csv(const bdris_results* res, const char* path)
{
    if (!res || !path) return fail(BDRIS_ERR_NULL_ARGUMENT, "res/path is null");
    return guarded([&] { write_file(path, [&](std::ostream& o) { bdris::write_csv(o, res->rows); }); });
}

bdris_status bdris_results_write_summary_csv(const bdris_results* res, const char* path)
{
    if (!res || !path) return fail(BDRIS_ERR_NULL_ARGUMENT, "res/path is null");
    return guarded([&] {
        const auto summary = bdris::summarize(res->rows);
        write_file(path, [&](std::ostream& o) { bdris::write_summary_csv(o, summary); });
    });
}

bdris_status bdris_audit_run(const bdris_config* cfg, uint64_t seed, int quick, bdris_audit_injection inject,
                             bdris_audit_report** out)
{
    if (!out) return fail(BDRIS_ERR_NULL_ARGUMENT, "out is null");
    return guarded([&] {
        bdris::AuditOptions opts;
        opts.quick = quick != 0;
        switch (inject) {
        case BDRIS_INJECT_NONE: opts.inject = bdris::AuditInjection::None; break;
        case BDRIS_INJECT_ASYMMETRIC_THETA: opts.inject = bdris::AuditInjection::AsymmetricTheta; break;
        case BDRIS_INJECT_FLIPPED_DELTA: opts.inject = bdris::AuditInjection::FlippedDelta; break;
        default: throw bdris::ConfigError("unknown audit injection");
        }
        const bdris::ScenarioConfig scenario = cfg ? cfg->cfg.scenario : bdris::ScenarioConfig{};
        bdris::Rng rng(seed);
        auto* rep = new bdris_audit_report{bdris::audit_invariants(scenario, rng, opts), {}};
        rep->text = rep->report.text();
        *out = rep;
    });
}

void bdris_audit_report_free(bdris_audit_report* rep) { delete rep; }

int bdris_audit_report_passed(const bdris_audit_report* rep) { return rep && rep->report.passed() ? 1 : 0; }

const char* bdris_audit_report_text(const bdris_audit_report* rep) { return rep ? rep->text.c_str() : ""; }

bdris_status bdris_optimal_bdris(const double* f_d, const double* g_a, size_t m, double theta_opt,
                                 bdris_qrot_mode qrot, uint64_t qrot_seed, double* theta_out)
{
    if (!f_d || !g_a || !theta_out) return fail(BDRIS_ERR_NULL_ARGUMENT, "f_d/g_a/theta_out is null");
    return guarded([&] {
        bdris::QrotMode mode;
        switch (qrot) {
        case BDRIS_QROT_IDENTITY: mode = bdris::QrotMode::identity(); break;
        case BDRIS_QROT_RANDOM: mode = bdris::QrotMode::random(qrot_seed); break;
        case BDRIS_QROT_ZERO: mode = bdris::QrotMode::zero(); break;
        default: throw bdris::ConfigError("unknown Q_rot mode");
        }
        const auto theta = bdris::optimal_bdris(read_vector(f_d, m), read_vector(g_a, m), theta_opt, mode);
        const Eigen::Index n = theta.size();
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index r = 0; r < n; ++r) {
                const std::size_t k = static_cast<std::size_t>(c * n + r);
                theta_out[2 * k] = theta.entries(r, c).real();
                theta_out[2 * k + 1] = theta.entries(r, c).imag();
            }
    });
}

bdris_status bdris_achievable_rate(const double* h, size_t n_r, size_t n_t, const double* r_xx, double sigma_sq,
                                   double* rate_out)
{
    if (!h || !r_xx || !rate_out) return fail(BDRIS_ERR_NULL_ARGUMENT, "h/r_xx/rate_out is null");
    return guarded([&] {
        *rate_out = bdris::achievable_rate(read_matrix(h, n_r, n_t), read_matrix(r_xx, n_t, n_t), sigma_sq);
    });
}

} // extern "C"
