#pragma once

#include "bdris/channel.hpp"
#include "bdris/rng.hpp"

#include <string>
#include <vector>

namespace bdris {

/// Deliberate faults for exercising the audit's negative controls.
enum class AuditInjection { None, AsymmetricTheta, FlippedDelta };

struct AuditOptions {
    bool quick = false;
    AuditInjection inject = AuditInjection::None;
};

struct AuditCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditCheck> checks;

    bool passed() const;
    std::string text() const;
};

/**
 * Runs the determinant-identity, feasibility, optimality-dominance,
 * waterfilling-KKT, route-consistency and alternating-monotonicity suites
 * on random instances drawn from `rng` and channels of `cfg`.
 */
AuditReport audit_invariants(const ScenarioConfig& cfg, Rng& rng, const AuditOptions& opts = {});

} // namespace bdris
