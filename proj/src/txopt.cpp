#include "bdris/txopt.hpp"

#include "bdris/rate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bdris {

ModeAllocation waterfill_modes(const RVector& mode_gains, double sigma_sq, double p_t)
{
    if (!(p_t > 0.0)) throw DomainError("waterfilling: power budget must be positive");
    if (!(sigma_sq > 0.0)) throw DomainError("waterfilling: noise variance must be positive");
    const Eigen::Index n = mode_gains.size();
    ModeAllocation out;
    out.powers = RVector::Zero(n);
    if (n == 0) return out;

    std::vector<Eigen::Index> order;
    for (Eigen::Index i = 0; i < n; ++i)
        if (mode_gains(i) > 0.0) order.push_back(i);
    if (order.empty()) {
        out.powers.setConstant(p_t / static_cast<double>(n));
        return out;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return mode_gains(a) > mode_gains(b); });

    // Noise floors sigma^2/lambda_i^2 ascend along `order`; shrink the active set
    // until the water level clears the weakest active floor.
    std::vector<double> floors(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) floors[k] = sigma_sq / mode_gains(order[k]);

    // Powers are formed from floor differences, p_k = (P + sum_j (c_j - c_k)) / |A|,
    // which stays accurate when the floors dwarf the budget.
    auto excess = [&](std::size_t active, std::size_t k) {
        double s = p_t;
        for (std::size_t j = 0; j < active; ++j) s += floors[j] - floors[k];
        return s / static_cast<double>(active);
    };
    std::size_t active = order.size();
    while (active > 1 && !(excess(active, active - 1) > 0.0)) --active;
    for (std::size_t k = 0; k < active; ++k) out.powers(order[k]) = excess(active, k);
    const double mu =
        (p_t + std::accumulate(floors.begin(), floors.begin() + static_cast<std::ptrdiff_t>(active), 0.0))
        / static_cast<double>(active);
    out.water_level = mu;
    return out;
}

TxCovariance isotropic_covariance(Eigen::Index n_t, double p_t)
{
    if (n_t < 1) throw DimensionError("isotropic_covariance: n_t must be >= 1");
    if (!(p_t > 0.0)) throw DomainError("isotropic_covariance: power budget must be positive");
    return {CMatrix::Identity(n_t, n_t) * (p_t / static_cast<double>(n_t)), p_t};
}

TxCovariance waterfilling(const CMatrix& h, double sigma_sq, double p_t)
{
    if (!(p_t > 0.0)) throw DomainError("waterfilling: power budget must be positive");
    if (!(sigma_sq > 0.0)) throw DomainError("waterfilling: noise variance must be positive");
    const Eigen::Index n_t = h.cols();
    Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return isotropic_covariance(n_t, p_t);

    RVector gains = RVector::Zero(n_t);
    gains.head(s.size()) = s.cwiseAbs2();
    const ModeAllocation alloc = waterfill_modes(gains, sigma_sq, p_t);

    const CMatrix& v = svd.matrixV();
    CMatrix r = v * alloc.powers.cast<Complex>().asDiagonal() * v.adjoint();
    return {0.5 * (r + r.adjoint()), p_t};
}

AlternatingResult alternating_optimize(const ChannelSet& ch, const ScatteringMatrix& theta_tilde,
                                       double p_t, double sigma_sq, const AlternatingOptions& opts)
{
    const auto* los = std::get_if<LosFactors>(&ch.ris_links);
    if (los == nullptr) throw ContractError("alternating_optimize: closed form requires pure-LoS RIS links");
    require_dims(theta_tilde.size() == ch.m(), "alternating_optimize: Theta size does not match M");

    // Fold any residual phase of the fixed part into the common phase, so the
    // coupling phase equals the optimum exactly.
    const double tilde_phase = coupling_of(theta_tilde, los->f_d, los->g_a).theta;

    struct Candidate {
        ScatteringMatrix theta;
        CMatrix h_eq;
    };
    auto phase_step = [&](const CMatrix& r_xx) {
        Candidate c;
        const double phase = optimal_phase(ch.direct, r_xx, sigma_sq, los->f_a, los->g_d);
        c.theta = theta_tilde;
        c.theta.entries *= std::polar(1.0, phase - tilde_phase);
        c.h_eq = assemble_equivalent(ch, c.theta);
        return c;
    };

    AlternatingResult res;
    res.covariance = isotropic_covariance(ch.n_t(), p_t);
    Candidate cur = phase_step(res.covariance.matrix);
    res.trace.rates.push_back(achievable_rate(cur.h_eq, res.covariance, sigma_sq));

    for (int it = 1; it <= opts.max_iterations; ++it) {
        res.covariance = waterfilling(cur.h_eq, sigma_sq, p_t);
        const double rate = achievable_rate(cur.h_eq, res.covariance, sigma_sq);
        res.trace.rates.push_back(rate);
        res.trace.iterations = it;

        Candidate next = phase_step(res.covariance.matrix);
        const double next_rate = achievable_rate(next.h_eq, res.covariance, sigma_sq);
        if (std::abs(next_rate - rate) <= opts.tolerance * std::max(std::abs(rate), 1e-12)) {
            res.trace.converged = true;
            break;
        }
        cur = std::move(next);
    }
    res.theta = std::move(cur.theta);
    return res;
}

AlternatingResult alternating_optimize(const ChannelSet& ch, const ScenarioConfig& cfg, QrotMode qrot,
                                       const AlternatingOptions& opts)
{
    const auto* los = std::get_if<LosFactors>(&ch.ris_links);
    if (los == nullptr) throw ContractError("alternating_optimize: closed form requires pure-LoS RIS links");
    const ScatteringMatrix tilde = optimal_bdris(los->f_d, los->g_a, 0.0, qrot);
    return alternating_optimize(ch, tilde, cfg.tx_power_w(), cfg.noise_power_w(), opts);
}

} // namespace bdris
