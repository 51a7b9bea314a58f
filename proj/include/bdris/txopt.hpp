#pragma once

#include "bdris/channel.hpp"
#include "bdris/scatter.hpp"
#include "bdris/types.hpp"

#include <vector>

namespace bdris {

struct TxCovariance {
    CMatrix matrix;
    double power_budget = 0.0;

    double trace() const { return matrix.trace().real(); }
};

/// Power allocation across parallel modes with gains lambda_i^2.
struct ModeAllocation {
    RVector powers;
    double water_level = 0.0;
};

/// Exact waterfilling by the sorted active-set rule; gains need not be sorted.
ModeAllocation waterfill_modes(const RVector& mode_gains, double sigma_sq, double p_t);

/// Capacity-achieving covariance for a fixed channel; isotropic when H = 0.
TxCovariance waterfilling(const CMatrix& h, double sigma_sq, double p_t);

TxCovariance isotropic_covariance(Eigen::Index n_t, double p_t);

struct AlternatingOptions {
    double tolerance = 1e-8; // relative rate change between outer iterations
    int max_iterations = 100;
};

/**
 * rates[0] is the isotropic-covariance rate with its optimal phase; rates[k]
 * is the rate after outer iteration k (phase update, then waterfilling).
 * Converged means the next phase update would change the rate by less than
 * the tolerance, i.e. the pair (phase, R_xx) is a fixed point.
 */
struct AlternatingTrace {
    std::vector<double> rates;
    int iterations = 0;
    bool converged = false;
};

struct AlternatingResult {
    ScatteringMatrix theta;
    TxCovariance covariance;
    AlternatingTrace trace;
};

/**
 * Alternates the optimal common phase with waterfilling. `theta_tilde` is the
 * fixed, phase-free part of the scattering matrix (BD-RIS Takagi solution or
 * a phase-aligned diagonal RIS), computed once outside the loop.
 * Requires pure-LoS RIS links.
 */
AlternatingResult alternating_optimize(const ChannelSet& ch, const ScatteringMatrix& theta_tilde,
                                       double p_t, double sigma_sq, const AlternatingOptions& opts = {});

/// Fully-connected BD-RIS variant; power and noise taken from the scenario.
AlternatingResult alternating_optimize(const ChannelSet& ch, const ScenarioConfig& cfg,
                                       QrotMode qrot = QrotMode::identity(),
                                       const AlternatingOptions& opts = {});

} // namespace bdris
