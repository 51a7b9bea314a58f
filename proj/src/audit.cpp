#include "bdris/audit.hpp"

#include "bdris/rate.hpp"
#include "bdris/scatter.hpp"
#include "bdris/txopt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bdris {

namespace {

CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
    CMatrix a(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) a(r, c) = rng.complex_normal(1.0);
    return a;
}

CVector gaussian_vector(Eigen::Index n, Rng& rng) { return gaussian_matrix(n, 1, rng).col(0); }

Eigen::Index uniform_index(Rng& rng, Eigen::Index lo, Eigen::Index hi)
{
    return lo + static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

std::string fmt(double v)
{
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

AuditCheck determinant_identity(Rng& rng, int count, bool flip)
{
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const Eigen::Index n = uniform_index(rng, 1, 8), m = uniform_index(rng, 1, 8);
        const CMatrix a = gaussian_matrix(n, m, rng);
        const CVector f = gaussian_vector(n, rng), g = gaussian_vector(m, rng);
        const double alpha = 3.0 * rng.uniform(), theta = 2.0 * kPi * rng.uniform();
        const CMatrix b = a + std::polar(alpha, theta) * f * g.adjoint();

        const GammaTriple gt = gammas(a, f, g);
        DeltaExpansion d = delta_expansion(gt, alpha, theta);
        if (flip) d.delta = d.z * alpha * alpha - 2.0 * alpha * (std::polar(1.0, theta) * gt.gamma3).real();

        const CMatrix id = CMatrix::Identity(n, n);
        const double lhs = (id + b * b.adjoint()).determinant().real();
        const double rhs = (id + a * a.adjoint()).determinant().real() * (1.0 + d.delta);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    return {"determinant-identity", worst <= 1e-10, "max relative error " + fmt(worst) + " over " + std::to_string(count)};
}

AuditCheck feasibility(const ScenarioConfig& cfg, Rng& rng, int count, bool inject)
{
    double worst = 0.0;
    int checked = 0;
    auto check = [&](ScatteringMatrix th) {
        if (inject && checked == 0) th.entries(0, th.size() > 1 ? 1 : 0) += 1e-3;
        worst = std::max({worst, th.symmetry_residual(), th.unitarity_residual()});
        ++checked;
    };
    for (int i = 0; i < count; ++i) {
        const ChannelSet ch = build_scenario_channels(with_pure_los(cfg), rng.split(static_cast<std::uint64_t>(i)));
        const auto& los = std::get<LosFactors>(ch.ris_links);
        const double phase = 2.0 * kPi * rng.uniform();
        check(optimal_bdris(los.f_d, los.g_a, phase));
        check(optimal_bdris(los.f_d, los.g_a, phase, QrotMode::random(rng.next_u64())));
        check(optimal_diagonal_ris(los.f_d, los.g_a, phase));
        const CVector fd = gaussian_vector(cfg.m, rng), ga = gaussian_vector(cfg.m, rng);
        check(optimal_bdris(fd, ga, phase, QrotMode::random(rng.next_u64())));
        for (int groups = 1; groups <= cfg.m; ++groups)
            if (cfg.m % groups == 0) check(group_connected_bdris(fd, ga, phase, groups));
        check(random_feasible_bdris(cfg.m, rng));
        check(random_diagonal_ris(cfg.m, rng));
    }
    return {"feasibility", worst <= 1e-10,
            "max symmetry/unitarity residual " + fmt(worst) + " over " + std::to_string(checked) + " matrices"};
}

AuditCheck optimality_dominance(Rng& rng, int instances, int draws)
{
    double worst_gap = 0.0;
    int beaten = 0;
    const Eigen::Index sizes[] = {4, 16};
    for (int i = 0; i < instances; ++i) {
        const Eigen::Index m = sizes[i % 2];
        const CVector fd = gaussian_vector(m, rng), ga = gaussian_vector(m, rng);
        const double bound = fd.norm() * ga.norm();
        const double alpha = coupling_of(optimal_bdris(fd, ga, 0.0), fd, ga).alpha;
        worst_gap = std::max(worst_gap, std::abs(alpha - bound) / bound);
        for (int k = 0; k < draws; ++k)
            if (coupling_of(random_feasible_bdris(m, rng), fd, ga).alpha > alpha * (1.0 + 1e-12)) ++beaten;
    }
    return {"optimality-dominance", worst_gap <= 1e-10 && beaten == 0,
            "max |alpha - ||f_d|| ||g_a|||/bound " + fmt(worst_gap) + ", random draws exceeding optimum: "
                + std::to_string(beaten)};
}

AuditCheck waterfilling_kkt(Rng& rng, int count)
{
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const Eigen::Index nr = uniform_index(rng, 1, 6), nt = uniform_index(rng, 1, 6);
        const CMatrix h = gaussian_matrix(nr, nt, rng);
        const double sigma_sq = 0.1 + rng.uniform(), p_t = 0.1 + 10.0 * rng.uniform();
        Eigen::JacobiSVD<CMatrix> svd(h);
        RVector gains = RVector::Zero(nt);
        gains.head(svd.singularValues().size()) = svd.singularValues().cwiseAbs2();
        const ModeAllocation alloc = waterfill_modes(gains, sigma_sq, p_t);
        double resid = std::abs(alloc.powers.sum() - p_t) / p_t;
        for (Eigen::Index k = 0; k < nt; ++k) {
            const double expect = gains(k) > 0.0 ? std::max(0.0, alloc.water_level - sigma_sq / gains(k)) : 0.0;
            resid = std::max(resid, std::abs(alloc.powers(k) - expect) / p_t);
        }
        const TxCovariance cov = waterfilling(h, sigma_sq, p_t);
        resid = std::max(resid, std::abs(cov.trace() - p_t) / p_t);
        worst = std::max(worst, resid);
    }
    return {"waterfilling-kkt", worst <= 1e-10, "max KKT/budget residual " + fmt(worst)};
}

AuditCheck route_consistency(Rng& rng, int count, bool flip)
{
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const Eigen::Index nr = uniform_index(rng, 1, 5), nt = uniform_index(rng, 1, 5), m = uniform_index(rng, 2, 8);
        ChannelSet ch;
        ch.direct = gaussian_matrix(nr, nt, rng);
        LosFactors los{gaussian_vector(nr, rng), gaussian_vector(m, rng), gaussian_vector(m, rng),
                       gaussian_vector(nt, rng)};
        const CMatrix x = gaussian_matrix(nt, nt, rng);
        const CMatrix r_xx = x * x.adjoint();
        const double sigma_sq = 0.5 + rng.uniform();
        Rng theta_rng = rng.split(static_cast<std::uint64_t>(i));
        const ScatteringMatrix theta = random_feasible_bdris(m, theta_rng);
        const CouplingResult c = coupling_of(theta, los.f_d, los.g_a);
        ch.ris_links = los;

        const double direct = achievable_rate(assemble_equivalent(ch, theta), r_xx, sigma_sq);
        RateReport rep = rate_via_expansion(ch.direct, r_xx, sigma_sq, los.f_a, los.g_d, c.alpha, c.theta);
        if (flip) {
            const GammaTriple gt = link_gammas(ch.direct, r_xx, sigma_sq, los.f_a, los.g_d);
            const double d = gt.z() * c.alpha * c.alpha - 2.0 * c.alpha * (std::polar(1.0, c.theta) * gt.gamma3).real();
            rep.rate_bits = rep.base_rate_bits + std::log2(std::max(1.0 + d, 1e-300));
        }
        worst = std::max(worst, std::abs(direct - rep.rate_bits) / std::max(1.0, direct));
    }
    return {"rate-routes", worst <= 1e-10, "max rate mismatch (expansion vs log-det) " + fmt(worst)};
}

AuditCheck alternating_monotone(const ScenarioConfig& cfg, Rng& rng, int count)
{
    double worst_drop = 0.0;
    int unconverged = 0;
    for (int i = 0; i < count; ++i) {
        const ChannelSet ch = build_scenario_channels(with_pure_los(cfg), rng.split(1000 + static_cast<std::uint64_t>(i)));
        const AlternatingResult res = alternating_optimize(ch, with_pure_los(cfg));
        for (std::size_t k = 1; k < res.trace.rates.size(); ++k)
            worst_drop = std::max(worst_drop, res.trace.rates[k - 1] - res.trace.rates[k]);
        if (!res.trace.converged) ++unconverged;
    }
    return {"alternating-monotonicity", worst_drop <= 1e-12 && unconverged == 0,
            "largest rate decrease " + fmt(worst_drop) + ", unconverged runs " + std::to_string(unconverged)};
}

} // namespace

bool AuditReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

std::string AuditReport::text() const
{
    std::ostringstream ss;
    for (const auto& c : checks) ss << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    ss << (passed() ? "audit passed" : "audit FAILED") << '\n';
    return ss.str();
}

AuditReport audit_invariants(const ScenarioConfig& cfg, Rng& rng, const AuditOptions& opts)
{
    cfg.validate();
    const int scale = opts.quick ? 1 : 5;
    AuditReport rep;
    rep.checks.push_back(determinant_identity(rng, 200 * scale, opts.inject == AuditInjection::FlippedDelta));
    rep.checks.push_back(feasibility(cfg, rng, 2 * scale, opts.inject == AuditInjection::AsymmetricTheta));
    rep.checks.push_back(optimality_dominance(rng, 10 * scale, 100 * scale));
    rep.checks.push_back(waterfilling_kkt(rng, 100 * scale));
    rep.checks.push_back(route_consistency(rng, 50 * scale, opts.inject == AuditInjection::FlippedDelta));
    rep.checks.push_back(alternating_monotone(cfg, rng, 2 * scale));
    return rep;
}

} // namespace bdris
