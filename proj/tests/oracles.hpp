#pragma once
// Reference computations used only by tests. Each one deliberately takes a
// different numerical route from the library: dense inverses, eigenvalue
// products, grid searches and bisection instead of Cholesky solves and
// closed forms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

/// Test-side generator, independent of the library RNG.
class Gen {
public:
    explicit Gen(unsigned seed) : eng_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    Complex cn() { return {nd_(eng_) * std::sqrt(0.5), nd_(eng_) * std::sqrt(0.5)}; }
    CMatrix matrix(Eigen::Index r, Eigen::Index c)
    {
        CMatrix m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i) m(i, j) = cn();
        return m;
    }
    CVector vector(Eigen::Index n) { return matrix(n, 1).col(0); }
    CMatrix psd(Eigen::Index n)
    {
        const CMatrix x = matrix(n, n);
        return x * x.adjoint();
    }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> nd_{0.0, 1.0};
};

/// Product of eigenvalues of a Hermitian matrix, as log2.
inline double log2_det_eig(const CMatrix& hermitian)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::log2(es.eigenvalues()(i));
    return s;
}

/// Rate through the eigenvalues of I + H R H^H / s2.
inline double rate_eig(const CMatrix& h, const CMatrix& r, double s2)
{
    const Eigen::Index n = h.rows();
    const CMatrix k = CMatrix::Identity(n, n) + h * r * h.adjoint() / s2;
    return log2_det_eig(0.5 * (k + k.adjoint()));
}

/// Gammas with an explicit dense inverse.
struct Gammas {
    double g1;
    double g2;
    Complex g3;
};

inline Gammas gammas_dense(const CMatrix& a, const CVector& f, const CVector& g)
{
    const Eigen::Index n = a.rows();
    const CMatrix e_inv = (CMatrix::Identity(n, n) + a * a.adjoint()).inverse();
    const CVector ag = a * g;
    return {(f.adjoint() * e_inv * f)(0, 0).real(), (ag.adjoint() * e_inv * ag)(0, 0).real(),
            (ag.adjoint() * e_inv * f)(0, 0)};
}

/// Square root of a Hermitian PSD matrix through the general (non-Hermitian) eigensolver.
inline CMatrix sqrt_psd(const CMatrix& r)
{
    Eigen::ComplexEigenSolver<CMatrix> es(r);
    RVector lam = es.eigenvalues().real().cwiseMax(0.0).cwiseSqrt();
    // Eigenvectors of a general solver need not be orthonormal for repeated eigenvalues; fall
    // back to the self-adjoint route when they are not.
    const CMatrix v = es.eigenvectors();
    if ((v.adjoint() * v - CMatrix::Identity(r.rows(), r.cols())).norm() > 1e-9) {
        Eigen::SelfAdjointEigenSolver<CMatrix> sa(r);
        return sa.operatorSqrt();
    }
    return v * lam.asDiagonal() * v.adjoint();
}

/// Maximizer of f over `steps` grid angles on [0, 2 pi); returns the best value.
inline double grid_max(const std::function<double(double)>& f, int steps)
{
    double best = -INFINITY;
    for (int k = 0; k < steps; ++k) best = std::max(best, f(2.0 * kPi * k / steps));
    return best;
}

/// Waterfilling by bisection on the water level.
inline RVector waterfill_bisect(const RVector& gains, double s2, double p)
{
    auto used = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < gains.size(); ++i)
            if (gains(i) > 0) s += std::max(0.0, mu - s2 / gains(i));
        return s;
    };
    double lo = 0.0, hi = p + s2 / gains.maxCoeff() + 1.0;
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        (used(mid) < p ? lo : hi) = mid;
    }
    RVector out(gains.size());
    for (Eigen::Index i = 0; i < gains.size(); ++i)
        out(i) = gains(i) > 0 ? std::max(0.0, 0.5 * (lo + hi) - s2 / gains(i)) : 0.0;
    return out;
}

/// U D U^T with U unitary (unnormalized QR of a Gaussian) and D unit-modulus diagonal.
/// A symmetric unitary matrix by construction, sampled independently of the library.
inline CMatrix random_symmetric_unitary(Gen& gen, Eigen::Index m)
{
    Eigen::HouseholderQR<CMatrix> qr(gen.matrix(m, m));
    const CMatrix u = qr.householderQ() * CMatrix::Identity(m, m);
    CVector d(m);
    for (Eigen::Index i = 0; i < m; ++i) d(i) = std::polar(1.0, gen.uniform(0.0, 2.0 * kPi));
    return u * d.asDiagonal() * u.transpose();
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

} // namespace oracle
