#include "bdris/rate.hpp"

#include "bdris/txopt.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bdris {

void require_psd(const CMatrix& r, const char* who)
{
    if (r.rows() != r.cols()) throw DimensionError(std::string(who) + ": covariance must be square");
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if ((r - r.adjoint()).norm() > 1e-10 * scale)
        throw DomainError(std::string(who) + ": covariance is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12 * scale)
        throw DomainError(std::string(who) + ": covariance is not positive semidefinite");
}

CMatrix hermitian_sqrt(const CMatrix& r)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
    const RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

double log2_det_hpd(const CMatrix& m)
{
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success) {
        // Falls back to the spectrum when round-off defeats Cholesky.
        Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().array().log().sum() / std::numbers::ln2;
    }
    const auto diag = llt.matrixLLT().diagonal().real();
    return 2.0 * diag.array().log().sum() / std::numbers::ln2;
}

double achievable_rate(const CMatrix& h, const CMatrix& r_xx, double sigma_sq)
{
    require_dims(r_xx.rows() == h.cols() && r_xx.cols() == h.cols(), "achievable_rate: R_xx must be N_T x N_T");
    if (!(sigma_sq > 0.0)) throw DomainError("achievable_rate: noise variance must be positive");
    require_psd(r_xx, "achievable_rate");
    CMatrix m = CMatrix::Identity(h.rows(), h.rows()) + h * r_xx * h.adjoint() / sigma_sq;
    m = (0.5 * (m + m.adjoint())).eval();
    return std::max(0.0, log2_det_hpd(m));
}

double achievable_rate(const CMatrix& h, const TxCovariance& r_xx, double sigma_sq)
{
    return achievable_rate(h, r_xx.matrix, sigma_sq);
}

GammaTriple gammas(const CMatrix& a, const CVector& f, const CVector& g)
{
    require_dims(f.size() == a.rows() && g.size() == a.cols(), "gammas: f must be n, g must be m for n x m A");
    const Eigen::Index n = a.rows();
    CMatrix e = CMatrix::Identity(n, n) + a * a.adjoint();
    Eigen::LLT<CMatrix> llt(e);
    const CVector ag = a * g;
    const CVector e_inv_f = llt.solve(f);
    const CVector e_inv_ag = llt.solve(ag);

    GammaTriple gt;
    gt.gamma1 = f.dot(e_inv_f).real();
    gt.gamma2 = ag.dot(e_inv_ag).real();
    gt.gamma3 = ag.dot(e_inv_f);
    gt.g_norm_sq = g.squaredNorm();
    return gt;
}

DeltaExpansion delta_expansion(const GammaTriple& gt, double alpha, double theta)
{
    if (alpha < 0.0) throw DomainError("delta_expansion: alpha must be >= 0");
    DeltaExpansion out;
    out.z = gt.z();
    out.delta = out.z * alpha * alpha + 2.0 * alpha * (std::polar(1.0, theta) * gt.gamma3).real();
    return out;
}

GammaTriple link_gammas(const CMatrix& h_d, const CMatrix& r_xx, double sigma_sq,
                        const CVector& f_a, const CVector& g_d)
{
    require_dims(r_xx.rows() == h_d.cols() && r_xx.cols() == h_d.cols(), "link_gammas: R_xx must be N_T x N_T");
    require_dims(f_a.size() == h_d.rows() && g_d.size() == h_d.cols(), "link_gammas: f_a/g_d do not match H_d");
    if (!(sigma_sq > 0.0)) throw DomainError("link_gammas: noise variance must be positive");
    require_psd(r_xx, "link_gammas");
    const double sigma = std::sqrt(sigma_sq);
    const CMatrix root = hermitian_sqrt(r_xx);
    return gammas(h_d * root / sigma, f_a, root * g_d / sigma);
}

RateReport rate_via_expansion(const CMatrix& h_d, const CMatrix& r_xx, double sigma_sq,
                              const CVector& f_a, const CVector& g_d, double alpha, double theta)
{
    const GammaTriple gt = link_gammas(h_d, r_xx, sigma_sq, f_a, g_d);
    RateReport rep;
    rep.base_rate_bits = achievable_rate(h_d, r_xx, sigma_sq);
    rep.delta = delta_expansion(gt, alpha, theta).delta;
    rep.rate_bits = rep.base_rate_bits + std::log2(1.0 + rep.delta);
    return rep;
}

double bdris_rate_gain(double f_d_norm, double g_a_norm, const GammaTriple& gt)
{
    if (f_d_norm < 0.0 || g_a_norm < 0.0) throw DomainError("bdris_rate_gain: norms must be >= 0");
    const double alpha = f_d_norm * g_a_norm;
    return std::log2(1.0 + alpha * alpha * gt.z() + 2.0 * alpha * std::abs(gt.gamma3));
}

} // namespace bdris
