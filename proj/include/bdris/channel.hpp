#pragma once

#include "bdris/rng.hpp"
#include "bdris/types.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <variant>

namespace bdris {

struct ScatteringMatrix;

/// Half-wavelength ULA response; unit norm, every entry of modulus 1/sqrt(M).
struct SteeringVector {
    CVector entries;
    double angle = 0.0;
};

SteeringVector ula_steering(double phi, Eigen::Index m);

/**
 * Rank-1 RIS links: F = f_a f_d^H (RIS -> Rx) and G^H = g_a g_d^H (Tx -> RIS).
 * The vectors carry the path-loss amplitude, they are not unit norm.
 */
struct LosFactors {
    CVector f_a; // N_R
    CVector f_d; // M
    CVector g_a; // M
    CVector g_d; // N_T

    CMatrix backward() const { return f_a * f_d.adjoint(); }  // F, N_R x M
    CMatrix forward() const { return g_d * g_a.adjoint(); }   // G, N_T x M
};

/// Full-rank RIS links (Ricean case) together with their LoS component.
struct FullLinks {
    CMatrix backward; // F, N_R x M
    CMatrix forward;  // G, N_T x M
    LosFactors los_component;
};

struct ChannelSet {
    CMatrix direct; // H_d, N_R x N_T
    std::variant<LosFactors, FullLinks> ris_links;

    bool pure_los() const { return std::holds_alternative<LosFactors>(ris_links); }
    CMatrix backward() const;
    CMatrix forward() const;
    Eigen::Index n_r() const { return direct.rows(); }
    Eigen::Index n_t() const { return direct.cols(); }
    Eigen::Index m() const;
};

using Position = std::array<double, 3>;

/// Scenario description. Decibel quantities live here only; everything else is linear.
struct ScenarioConfig {
    Position tx_pos{0.0, 0.0, 3.0};
    Position rx_pos{200.0, 200.0, 1.5};
    Position ris_pos{20.0, 20.0, 20.0};
    double pl0_db = -28.0;
    double beta_direct = 3.75;
    double beta_ris = 2.0;
    double pt_dbm = 30.0;
    double bandwidth_hz = 20e6;
    double noise_figure_db = 10.0;
    double ricean_k = std::numeric_limits<double>::infinity(); // inf: pure LoS
    int n_t = 4;
    int n_r = 4;
    int m = 64;
    int trials = 200;
    std::uint64_t seed = 1;

    void validate() const;
    double tx_power_w() const { return dbm_to_watts(pt_dbm); }
    double noise_power_w() const;
};

/// Same scenario with the RIS links forced to pure LoS.
ScenarioConfig with_pure_los(ScenarioConfig cfg);

double path_loss_db(double distance_m, double beta, double pl0_db);
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

double distance(const Position& a, const Position& b);
/// Azimuth of the direction from -> to, projected on the horizontal plane.
double azimuth(const Position& from, const Position& to);

/// i.i.d. CN(0, gain) entries with gain the linear value of pathloss_db.
CMatrix rayleigh_channel(Eigen::Index rows, Eigen::Index cols, double pathloss_db, Rng& rng);

CMatrix ricean_mix(const CMatrix& los, const CMatrix& nlos, double k);

/// H_d + F Theta G^H. Pure-LoS links take the factored route of the rank-1 model.
CMatrix assemble_equivalent(const ChannelSet& ch, const CMatrix& theta);
CMatrix assemble_equivalent(const ChannelSet& ch, const ScatteringMatrix& theta);

/// LoS factors for one link pair, path loss split evenly between the two ends.
LosFactors los_factors(const ScenarioConfig& cfg);

/**
 * Draws one channel realization. The direct link and the NLoS part of the
 * RIS links come from distinct child streams of `rng`, so H_d depends only
 * on the stream and not on the Ricean factor.
 */
ChannelSet build_scenario_channels(const ScenarioConfig& cfg, const Rng& rng);

/// Dominant rank-1 approximation of each RIS link, split as in los_factors().
LosFactors dominant_factors(const CMatrix& backward, const CMatrix& forward);

} // namespace bdris
