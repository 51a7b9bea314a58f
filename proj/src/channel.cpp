#include "bdris/channel.hpp"

#include "bdris/scatter.hpp"

#include <cmath>
#include <string>

namespace bdris {

namespace {

constexpr std::uint64_t kDirectStream = 1;
constexpr std::uint64_t kRisNlosStream = 2;

CVector scaled_steering(double phi, Eigen::Index n, double entry_amplitude)
{
    // Entries of a unit steering vector have modulus 1/sqrt(n).
    return ula_steering(phi, n).entries * (entry_amplitude * std::sqrt(static_cast<double>(n)));
}

} // namespace

SteeringVector ula_steering(double phi, Eigen::Index m)
{
    if (m < 1) throw DimensionError("ula_steering: element count must be >= 1");
    if (!std::isfinite(phi)) throw DomainError("ula_steering: angle must be finite");
    SteeringVector sv;
    sv.angle = phi;
    sv.entries.resize(m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    const double step = -kPi * std::sin(phi);
    for (Eigen::Index k = 0; k < m; ++k)
        sv.entries(k) = std::polar(scale, step * static_cast<double>(k));
    return sv;
}

double path_loss_db(double distance_m, double beta, double pl0_db)
{
    if (!(distance_m >= 1.0))
        throw DomainError("path_loss_db: distance below the 1 m reference (" + std::to_string(distance_m) + " m)");
    return pl0_db - beta * 10.0 * std::log10(distance_m);
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0)) throw DomainError("noise_power_dbm: bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double distance(const Position& a, const Position& b)
{
    const double dx = b[0] - a[0], dy = b[1] - a[1], dz = b[2] - a[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double azimuth(const Position& from, const Position& to)
{
    return std::atan2(to[1] - from[1], to[0] - from[0]);
}

void ScenarioConfig::validate() const
{
    if (n_t < 1 || n_r < 1 || m < 1) throw ConfigError("dimensions n_t, n_r, m must be >= 1");
    if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be positive");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (std::isnan(ricean_k) || ricean_k < 0.0) throw ConfigError("ricean_k must be >= 0");
    for (double v : {pl0_db, beta_direct, beta_ris, pt_dbm, noise_figure_db})
        if (!std::isfinite(v)) throw ConfigError("scenario constants must be finite");
}

ScenarioConfig with_pure_los(ScenarioConfig cfg)
{
    cfg.ricean_k = std::numeric_limits<double>::infinity();
    return cfg;
}

double ScenarioConfig::noise_power_w() const
{
    return dbm_to_watts(noise_power_dbm(bandwidth_hz, noise_figure_db));
}

CMatrix ChannelSet::backward() const
{
    if (const auto* los = std::get_if<LosFactors>(&ris_links)) return los->backward();
    return std::get<FullLinks>(ris_links).backward;
}

CMatrix ChannelSet::forward() const
{
    if (const auto* los = std::get_if<LosFactors>(&ris_links)) return los->forward();
    return std::get<FullLinks>(ris_links).forward;
}

Eigen::Index ChannelSet::m() const
{
    if (const auto* los = std::get_if<LosFactors>(&ris_links)) return los->f_d.size();
    return std::get<FullLinks>(ris_links).backward.cols();
}

CMatrix rayleigh_channel(Eigen::Index rows, Eigen::Index cols, double pathloss_db, Rng& rng)
{
    if (rows < 1 || cols < 1) throw DimensionError("rayleigh_channel: dimensions must be >= 1");
    const double gain = db_to_linear(pathloss_db);
    CMatrix h(rows, cols);
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            h(r, c) = rng.complex_normal(gain);
    return h;
}

CMatrix ricean_mix(const CMatrix& los, const CMatrix& nlos, double k)
{
    require_dims(los.rows() == nlos.rows() && los.cols() == nlos.cols(),
                 "ricean_mix: LoS and NLoS parts differ in shape");
    if (std::isnan(k) || k < 0.0) throw DomainError("ricean_mix: K must be >= 0");
    if (std::isinf(k)) return los;
    return std::sqrt(k / (1.0 + k)) * los + std::sqrt(1.0 / (1.0 + k)) * nlos;
}

CMatrix assemble_equivalent(const ChannelSet& ch, const CMatrix& theta)
{
    const Eigen::Index m = ch.m();
    require_dims(theta.rows() == m && theta.cols() == m, "assemble_equivalent: Theta must be M x M");
    if (const auto* los = std::get_if<LosFactors>(&ch.ris_links)) {
        require_dims(los->f_a.size() == ch.n_r() && los->g_d.size() == ch.n_t(),
                     "assemble_equivalent: LoS factors do not match H_d");
        const Complex coupling = los->f_d.dot(theta * los->g_a);
        return ch.direct + coupling * los->f_a * los->g_d.adjoint();
    }
    const auto& full = std::get<FullLinks>(ch.ris_links);
    require_dims(full.backward.rows() == ch.n_r() && full.forward.rows() == ch.n_t()
                     && full.forward.cols() == m,
                 "assemble_equivalent: RIS links do not match H_d");
    return ch.direct + full.backward * theta * full.forward.adjoint();
}

CMatrix assemble_equivalent(const ChannelSet& ch, const ScatteringMatrix& theta)
{
    return assemble_equivalent(ch, theta.entries);
}

LosFactors los_factors(const ScenarioConfig& cfg)
{
    const double d_tx_ris = distance(cfg.tx_pos, cfg.ris_pos);
    const double d_ris_rx = distance(cfg.ris_pos, cfg.rx_pos);
    if (d_tx_ris == 0.0 || d_ris_rx == 0.0) throw GeometryError("RIS coincides with the Tx or Rx");

    // Per-entry amplitude of each rank-1 link is sqrt(gain); each end takes gain^(1/4).
    const double amp_g = std::pow(db_to_linear(path_loss_db(d_tx_ris, cfg.beta_ris, cfg.pl0_db)), 0.25);
    const double amp_f = std::pow(db_to_linear(path_loss_db(d_ris_rx, cfg.beta_ris, cfg.pl0_db)), 0.25);

    LosFactors los;
    los.f_a = scaled_steering(azimuth(cfg.rx_pos, cfg.ris_pos), cfg.n_r, amp_f);
    los.f_d = scaled_steering(azimuth(cfg.ris_pos, cfg.rx_pos), cfg.m, amp_f);
    los.g_a = scaled_steering(azimuth(cfg.ris_pos, cfg.tx_pos), cfg.m, amp_g);
    los.g_d = scaled_steering(azimuth(cfg.tx_pos, cfg.ris_pos), cfg.n_t, amp_g);
    return los;
}

ChannelSet build_scenario_channels(const ScenarioConfig& cfg, const Rng& rng)
{
    cfg.validate();
    const double d_direct = distance(cfg.tx_pos, cfg.rx_pos);
    if (d_direct == 0.0) throw GeometryError("Tx and Rx coincide");

    ChannelSet ch;
    Rng direct_rng = rng.split(kDirectStream);
    ch.direct = rayleigh_channel(cfg.n_r, cfg.n_t, path_loss_db(d_direct, cfg.beta_direct, cfg.pl0_db), direct_rng);

    LosFactors los = los_factors(cfg);
    if (std::isinf(cfg.ricean_k)) {
        ch.ris_links = std::move(los);
        return ch;
    }

    Rng nlos_rng = rng.split(kRisNlosStream);
    const double pl_f = path_loss_db(distance(cfg.ris_pos, cfg.rx_pos), cfg.beta_ris, cfg.pl0_db);
    const double pl_g = path_loss_db(distance(cfg.tx_pos, cfg.ris_pos), cfg.beta_ris, cfg.pl0_db);
    const CMatrix f_nlos = rayleigh_channel(cfg.n_r, cfg.m, pl_f, nlos_rng);
    const CMatrix g_nlos = rayleigh_channel(cfg.n_t, cfg.m, pl_g, nlos_rng);

    FullLinks full;
    full.backward = ricean_mix(los.backward(), f_nlos, cfg.ricean_k);
    full.forward = ricean_mix(los.forward(), g_nlos, cfg.ricean_k);
    full.los_component = std::move(los);
    ch.ris_links = std::move(full);
    return ch;
}

LosFactors dominant_factors(const CMatrix& backward, const CMatrix& forward)
{
    require_dims(backward.cols() == forward.cols(), "dominant_factors: F and G disagree on M");
    Eigen::JacobiSVD<CMatrix> svd_f(backward, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::JacobiSVD<CMatrix> svd_g(forward, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sf = std::sqrt(svd_f.singularValues()(0));
    const double sg = std::sqrt(svd_g.singularValues()(0));

    LosFactors out;
    out.f_a = sf * svd_f.matrixU().col(0);
    out.f_d = sf * svd_f.matrixV().col(0);
    out.g_d = sg * svd_g.matrixU().col(0);
    out.g_a = sg * svd_g.matrixV().col(0);
    return out;
}

} // namespace bdris
