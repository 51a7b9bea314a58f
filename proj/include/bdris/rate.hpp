#pragma once

#include "bdris/types.hpp"

namespace bdris {

struct TxCovariance;

/// Scalars of the rank-1 determinant expansion for B = A + c f g^H.
struct GammaTriple {
    double gamma1 = 0.0;  // f^H E^-1 f,          E = I + A A^H
    double gamma2 = 0.0;  // (Ag)^H E^-1 (Ag)
    Complex gamma3{};     // (Ag)^H E^-1 f
    double g_norm_sq = 0.0;

    /// Z = |gamma3|^2 + gamma1 (||g||^2 - gamma2); positive unless f = 0.
    double z() const { return std::norm(gamma3) + gamma1 * (g_norm_sq - gamma2); }
};

struct DeltaExpansion {
    double delta = 0.0;
    double z = 0.0;
};

struct RateReport {
    double rate_bits = 0.0;
    double delta = 0.0;
    double base_rate_bits = 0.0;
};

/// log2 det(I + H R H^H / sigma^2) in bits/s/Hz.
double achievable_rate(const CMatrix& h, const CMatrix& r_xx, double sigma_sq);
double achievable_rate(const CMatrix& h, const TxCovariance& r_xx, double sigma_sq);

/// Throws DomainError unless r is Hermitian PSD (tolerance relative to its scale).
void require_psd(const CMatrix& r, const char* who);

/// Hermitian PSD square root through an eigendecomposition.
CMatrix hermitian_sqrt(const CMatrix& r);

/// log2 det of a Hermitian positive definite matrix via Cholesky.
double log2_det_hpd(const CMatrix& m);

/// gamma1..3 via a Cholesky solve with I + A A^H; no explicit inverse.
GammaTriple gammas(const CMatrix& a, const CVector& f, const CVector& g);

/// Delta = Z alpha^2 + 2 alpha Re(e^{j theta} gamma3).
DeltaExpansion delta_expansion(const GammaTriple& gt, double alpha, double theta);

/**
 * Rate of H = H_d + alpha e^{j theta} f_a g_d^H through the expansion:
 * A = H_d R^{1/2}/sigma, g = R^{1/2} g_d / sigma, f = f_a.
 */
RateReport rate_via_expansion(const CMatrix& h_d, const CMatrix& r_xx, double sigma_sq,
                              const CVector& f_a, const CVector& g_d, double alpha, double theta);

/// The gamma triple after absorbing R_xx and sigma into A and g.
GammaTriple link_gammas(const CMatrix& h_d, const CMatrix& r_xx, double sigma_sq,
                        const CVector& f_a, const CVector& g_d);

/// Best-case rate gain of an optimal (fully-connected) BD-RIS over no RIS.
double bdris_rate_gain(double f_d_norm, double g_a_norm, const GammaTriple& gt);

} // namespace bdris
