#pragma once

#include "bdris/rng.hpp"
#include "bdris/types.hpp"

#include <cstdint>
#include <string_view>

namespace bdris {

enum class Architecture { FullyConnected, GroupConnected, Diagonal, LossyRank2, Random };

std::string_view to_string(Architecture a);

struct ScatteringMatrix {
    CMatrix entries;
    Architecture architecture = Architecture::FullyConnected;
    int groups = 1; // meaningful for GroupConnected

    Eigen::Index size() const { return entries.rows(); }
    /// ||Theta - Theta^T||_F
    double symmetry_residual() const;
    /// ||Theta^H Theta - I||_F
    double unitarity_residual() const;
    /// Symmetric and unitary, both within tol.
    bool feasible(double tol = 1e-10) const;
};

/// Modulus and phase of f_d^H Theta g_a.
struct CouplingResult {
    double alpha = 0.0;
    double theta = 0.0;
};

CouplingResult coupling_of(const ScatteringMatrix& theta, const CVector& f_d, const CVector& g_a);
CouplingResult coupling_of(const CMatrix& theta, const CVector& f_d, const CVector& g_a);

/**
 * Takagi factorization of a complex symmetric matrix restricted to its
 * numerical range: sym = signal * diag(values) * signal^T with orthonormal
 * columns in `signal`. `null_basis` completes `signal` to a unitary matrix
 * and is the conjugate of the trailing right singular vectors (V2^*).
 */
struct TakagiFactor {
    CMatrix signal;
    RVector values;
    CMatrix null_basis;
};

/// Rank is detected with threshold rank_tol * sigma_max; at most max_rank columns kept.
TakagiFactor takagi_factorization(const CMatrix& sym, Eigen::Index max_rank = 2, double rank_tol = 1e-12);

/// Selects the (M-2)x(M-2) unitary rotating the null-subspace term.
struct QrotMode {
    enum class Kind { Identity, Random, Zero };
    Kind kind = Kind::Identity;
    std::uint64_t seed = 0;

    static QrotMode identity() { return {Kind::Identity, 0}; }
    static QrotMode random(std::uint64_t seed) { return {Kind::Random, seed}; }
    static QrotMode zero() { return {Kind::Zero, 0}; }
};

/// Optimal phase of the RIS coupling; 0 when the direct-link term vanishes.
double optimal_phase(const CMatrix& h_d, const CMatrix& r_xx, double sigma_sq,
                     const CVector& f_a, const CVector& g_d);

/**
 * Closed-form fully-connected BD-RIS: e^{j theta_opt} (U1 V1^H + V2^* Q^* Q^H V2^H)
 * built from the Takagi factorization of T = f_d g_a^H + (f_d g_a^H)^T.
 * Achieves |f_d^H Theta g_a| = ||f_d|| ||g_a||. QrotMode::zero() returns the
 * lossy rank-2 matrix instead. For M = 1 the unit-modulus phase aligner is returned.
 */
ScatteringMatrix optimal_bdris(const CVector& f_d, const CVector& g_a, double theta_opt,
                               QrotMode qrot = QrotMode::identity());

/// Phase-aligned diagonal RIS: alpha = ||f_d^* (.) g_a||_1.
ScatteringMatrix optimal_diagonal_ris(const CVector& f_d, const CVector& g_a, double theta_opt);

/// Block-diagonal BD-RIS with `groups` fully-connected blocks of M/groups elements.
ScatteringMatrix group_connected_bdris(const CVector& f_d, const CVector& g_a, double theta_opt, int groups);

/// Haar-distributed unitary (QR of a complex Ginibre matrix, R-diagonal phases fixed).
CMatrix haar_unitary(Eigen::Index n, Rng& rng);

/// Q Q^T for Haar Q: a random point of the symmetric-unitary set.
ScatteringMatrix random_feasible_bdris(Eigen::Index m, Rng& rng);

/**
 * Draws the coupling f_d^H (Q Q^T) g_a for Haar Q in O(M) work.
 *
 * Only the images of f_d and conj(g_a) under Q^H enter the coupling, and for
 * Haar Q those are a Haar M x k isometry applied to the coordinates of the two
 * vectors in an orthonormal basis of their span (k <= 2). The law of each draw
 * is therefore identical to coupling_of(random_feasible_bdris(M, rng), ...).
 */
class RandomCouplingSampler {
public:
    struct Draw {
        CouplingResult coupling;
        CMatrix frame; // M x k Haar isometry, the image of the span basis
    };

    RandomCouplingSampler(const CVector& f_d, const CVector& g_a);

    Draw draw(Rng& rng) const;
    /// A concrete symmetric unitary Theta whose coupling equals that of `d`.
    ScatteringMatrix witness(const Draw& d) const;

private:
    CMatrix basis_;  // M x k orthonormal basis of span{f_d, conj(g_a)}
    CVector coord_x_; // f_d = basis_ * coord_x_
    CVector coord_y_; // conj(g_a) = basis_ * coord_y_
};

/// Diagonal with i.i.d. uniform phases.
ScatteringMatrix random_diagonal_ris(Eigen::Index m, Rng& rng);

} // namespace bdris
