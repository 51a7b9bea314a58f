#include "bdris/scatter.hpp"

#include <cmath>
#include <string>

namespace bdris {

namespace {

// Post-hoc symmetry check on constructed scattering matrices.
constexpr double kSymmetryFailure = 1e-8;

void require_same_length(const CVector& f_d, const CVector& g_a, const char* who)
{
    require_dims(f_d.size() == g_a.size() && f_d.size() >= 1,
                 std::string(who) + ": f_d and g_a must share a length M >= 1");
}

CMatrix scalar_aligner(const CVector& f_d, const CVector& g_a, double theta_opt)
{
    const Complex c = std::conj(f_d(0)) * g_a(0);
    const double phase = c == Complex{} ? 0.0 : std::arg(c);
    CMatrix out(1, 1);
    out(0, 0) = std::polar(1.0, theta_opt - phase);
    return out;
}

} // namespace

std::string_view to_string(Architecture a)
{
    switch (a) {
    case Architecture::FullyConnected: return "fully-connected";
    case Architecture::GroupConnected: return "group-connected";
    case Architecture::Diagonal: return "diagonal";
    case Architecture::LossyRank2: return "lossy-rank-2";
    case Architecture::Random: return "random";
    }
    return "unknown";
}

double ScatteringMatrix::symmetry_residual() const
{
    return (entries - entries.transpose()).norm();
}

double ScatteringMatrix::unitarity_residual() const
{
    const Eigen::Index m = entries.rows();
    return (entries.adjoint() * entries - CMatrix::Identity(m, m)).norm();
}

bool ScatteringMatrix::feasible(double tol) const
{
    return entries.rows() == entries.cols() && symmetry_residual() <= tol && unitarity_residual() <= tol;
}

CouplingResult coupling_of(const CMatrix& theta, const CVector& f_d, const CVector& g_a)
{
    require_dims(theta.rows() == theta.cols() && theta.rows() == f_d.size() && f_d.size() == g_a.size(),
                 "coupling_of: Theta must be M x M with f_d, g_a of length M");
    const Complex c = f_d.dot(theta * g_a);
    return {std::abs(c), std::arg(c)};
}

CouplingResult coupling_of(const ScatteringMatrix& theta, const CVector& f_d, const CVector& g_a)
{
    return coupling_of(theta.entries, f_d, g_a);
}

TakagiFactor takagi_factorization(const CMatrix& sym, Eigen::Index max_rank, double rank_tol)
{
    require_dims(sym.rows() == sym.cols(), "takagi_factorization: matrix must be square");
    const Eigen::Index n = sym.rows();
    Eigen::JacobiSVD<CMatrix> svd(sym, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();

    Eigen::Index r = 0;
    if (n > 0 && s(0) > 0.0) {
        const double cut = rank_tol * s(0);
        while (r < std::min(n, max_rank) && s(r) > cut) ++r;
    }

    TakagiFactor out;
    out.null_basis = svd.matrixV().rightCols(n - r).conjugate();
    if (r == 0) {
        out.signal.resize(n, 0);
        out.values.resize(0);
        return out;
    }

    // Within the signal subspace P, sym = P S P^T with S = P^H sym P^* symmetric r x r.
    // Takagi of S solves S conj(w) = sigma w; writing w = x + i y turns this
    // into the real symmetric eigenproblem [Re S, Im S; Im S, -Re S] (x; y) = sigma (x; y),
    // whose spectrum is {+-sigma_k}. Degenerate sigma_k are handled by the
    // symmetric eigensolver without any phase bookkeeping.
    const CMatrix p = svd.matrixU().leftCols(r);
    CMatrix small = p.adjoint() * sym * p.conjugate();
    small = (0.5 * (small + small.transpose())).eval();

    Eigen::MatrixXd embed(2 * r, 2 * r);
    embed.topLeftCorner(r, r) = small.real();
    embed.topRightCorner(r, r) = small.imag();
    embed.bottomLeftCorner(r, r) = small.imag();
    embed.bottomRightCorner(r, r) = -small.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(embed);

    CMatrix w(r, r);
    out.values.resize(r);
    for (Eigen::Index k = 0; k < r; ++k) {
        const Eigen::Index col = 2 * r - 1 - k; // eigenvalues ascend
        const auto v = es.eigenvectors().col(col);
        for (Eigen::Index i = 0; i < r; ++i) w(i, k) = Complex(v(i), v(r + i));
        out.values(k) = es.eigenvalues()(col);
    }
    out.signal = p * w;
    return out;
}

double optimal_phase(const CMatrix& h_d, const CMatrix& r_xx, double sigma_sq,
                     const CVector& f_a, const CVector& g_d)
{
    require_dims(r_xx.rows() == h_d.cols() && r_xx.cols() == h_d.cols(), "optimal_phase: R_xx must be N_T x N_T");
    require_dims(f_a.size() == h_d.rows() && g_d.size() == h_d.cols(), "optimal_phase: f_a/g_d do not match H_d");
    if (!(sigma_sq > 0.0)) throw DomainError("optimal_phase: noise variance must be positive");

    const Eigen::Index n_r = h_d.rows();
    const CMatrix rh = r_xx * h_d.adjoint(); // N_T x N_R
    CMatrix e = CMatrix::Identity(n_r, n_r) + h_d * rh / sigma_sq;
    const CVector v = e.llt().solve(f_a);
    const Complex s = g_d.dot(rh * v);

    const double scale = g_d.norm() * rh.norm() * f_a.norm();
    if (scale == 0.0 || std::abs(s) <= 1e-14 * scale) return 0.0;
    return -std::arg(s);
}

ScatteringMatrix optimal_bdris(const CVector& f_d, const CVector& g_a, double theta_opt, QrotMode qrot)
{
    require_same_length(f_d, g_a, "optimal_bdris");
    if (f_d.norm() == 0.0 || g_a.norm() == 0.0) throw DomainError("optimal_bdris: f_d and g_a must be nonzero");

    ScatteringMatrix out;
    out.architecture = qrot.kind == QrotMode::Kind::Zero ? Architecture::LossyRank2 : Architecture::FullyConnected;
    const Eigen::Index m = f_d.size();
    if (m < 2) {
        out.architecture = Architecture::FullyConnected;
        out.entries = scalar_aligner(f_d, g_a, theta_opt);
        return out;
    }

    const CMatrix outer = f_d * g_a.adjoint();
    const CMatrix t = outer + outer.transpose();
    const TakagiFactor tk = takagi_factorization(t, 2);

    CMatrix tilde = tk.signal * tk.signal.transpose(); // U1 V1^H with V1 = U1^*
    const Eigen::Index null_dim = tk.null_basis.cols();
    if (qrot.kind != QrotMode::Kind::Zero && null_dim > 0) {
        const CMatrix& v2c = tk.null_basis; // V2^*
        if (qrot.kind == QrotMode::Kind::Identity) {
            tilde += v2c * v2c.transpose();
        } else {
            Rng rng(qrot.seed);
            const CMatrix q = haar_unitary(null_dim, rng);
            tilde += v2c * (q.conjugate() * q.adjoint()) * v2c.transpose();
        }
    }

    const double asym = (tilde - tilde.transpose()).norm();
    if (asym > kSymmetryFailure)
        throw InvariantError("optimal_bdris: Takagi construction lost symmetry (" + std::to_string(asym) + ")");

    out.entries = std::polar(1.0, theta_opt) * tilde;
    return out;
}

ScatteringMatrix optimal_diagonal_ris(const CVector& f_d, const CVector& g_a, double theta_opt)
{
    require_same_length(f_d, g_a, "optimal_diagonal_ris");
    const Eigen::Index m = f_d.size();
    CVector phases(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Complex c = std::conj(f_d(i)) * g_a(i);
        const double p = c == Complex{} ? 0.0 : -std::arg(c);
        phases(i) = std::polar(1.0, theta_opt + p);
    }
    ScatteringMatrix out;
    out.architecture = Architecture::Diagonal;
    out.entries = phases.asDiagonal();
    return out;
}

ScatteringMatrix group_connected_bdris(const CVector& f_d, const CVector& g_a, double theta_opt, int groups)
{
    require_same_length(f_d, g_a, "group_connected_bdris");
    const Eigen::Index m = f_d.size();
    if (groups < 1 || m % groups != 0)
        throw ConfigError("group_connected_bdris: group count " + std::to_string(groups)
                          + " does not divide M = " + std::to_string(m));

    const Eigen::Index block = m / groups;
    ScatteringMatrix out;
    out.architecture = Architecture::GroupConnected;
    out.groups = groups;
    out.entries = CMatrix::Zero(m, m);
    for (int g = 0; g < groups; ++g) {
        const Eigen::Index start = g * block;
        const CVector fg = f_d.segment(start, block);
        const CVector gg = g_a.segment(start, block);
        // A group that sees no signal contributes nothing; any feasible block will do.
        if (fg.norm() == 0.0 || gg.norm() == 0.0) {
            out.entries.block(start, start, block, block).setIdentity();
            continue;
        }
        out.entries.block(start, start, block, block) = optimal_bdris(fg, gg, 0.0).entries;
    }
    out.entries *= std::polar(1.0, theta_opt);
    return out;
}

CMatrix haar_unitary(Eigen::Index n, Rng& rng)
{
    if (n < 1) throw DimensionError("haar_unitary: size must be >= 1");
    CMatrix z(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r)
            z(r, c) = rng.complex_normal(1.0);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const auto diag = qr.matrixQR().diagonal();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double mag = std::abs(diag(k));
        if (mag > 0.0) q.col(k) *= diag(k) / mag;
    }
    return q;
}

ScatteringMatrix random_feasible_bdris(Eigen::Index m, Rng& rng)
{
    const CMatrix q = haar_unitary(m, rng);
    ScatteringMatrix out;
    out.architecture = Architecture::Random;
    out.entries = q * q.transpose();
    return out;
}

namespace {

// Modified Gram-Schmidt on the columns of z, dropping numerically dependent ones.
CMatrix orthonormal_columns(const CMatrix& z, double rel_tol)
{
    CMatrix q(z.rows(), 0);
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        CVector v = z.col(c);
        const double scale = v.norm();
        for (Eigen::Index k = 0; k < q.cols(); ++k) v -= q.col(k) * q.col(k).dot(v);
        const double n = v.norm();
        if (scale == 0.0 || n <= rel_tol * scale) continue;
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = v / n;
    }
    return q;
}

// Unitary whose leading columns are the orthonormal columns of `lead`.
CMatrix complete_unitary(const CMatrix& lead)
{
    const Eigen::Index m = lead.rows();
    Eigen::HouseholderQR<CMatrix> qr(lead);
    CMatrix full = qr.householderQ() * CMatrix::Identity(m, m);
    full.leftCols(lead.cols()) = lead;
    return full;
}

} // namespace

RandomCouplingSampler::RandomCouplingSampler(const CVector& f_d, const CVector& g_a)
{
    require_same_length(f_d, g_a, "RandomCouplingSampler");
    CMatrix span(f_d.size(), 2);
    span.col(0) = f_d;
    span.col(1) = g_a.conjugate();
    basis_ = orthonormal_columns(span, 1e-13);
    coord_x_ = basis_.adjoint() * f_d;
    coord_y_ = basis_.adjoint() * g_a.conjugate();
}

RandomCouplingSampler::Draw RandomCouplingSampler::draw(Rng& rng) const
{
    Draw d;
    const Eigen::Index m = basis_.rows(), k = basis_.cols();
    if (k == 0) {
        d.frame = CMatrix(m, 0);
        return d;
    }
    CMatrix z(m, k);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index r = 0; r < m; ++r) z(r, c) = rng.complex_normal(1.0);
    // Gram-Schmidt with a positive R diagonal is unitarily equivariant, so the
    // result is Haar on the Stiefel manifold. A Ginibre draw has full rank a.s.
    d.frame = orthonormal_columns(z, 0.0);
    if (d.frame.cols() != k) throw InvariantError("RandomCouplingSampler: degenerate Gaussian frame");
    const CMatrix gram = d.frame.adjoint() * d.frame.conjugate();
    const Complex c = coord_x_.dot(gram * coord_y_.conjugate());
    d.coupling = {std::abs(c), std::arg(c)};
    return d;
}

ScatteringMatrix RandomCouplingSampler::witness(const Draw& d) const
{
    require_dims(d.frame.rows() == basis_.rows() && d.frame.cols() == basis_.cols(),
                 "RandomCouplingSampler::witness: frame does not belong to this sampler");
    const Eigen::Index m = basis_.rows();
    // P maps the span basis onto the frame; Q = P^H gives Theta = P^H conj(P).
    const CMatrix p = basis_.cols() == 0 ? CMatrix(CMatrix::Identity(m, m))
                                         : CMatrix(complete_unitary(d.frame) * complete_unitary(basis_).adjoint());
    ScatteringMatrix out;
    out.architecture = Architecture::Random;
    out.entries = p.adjoint() * p.conjugate();
    return out;
}

ScatteringMatrix random_diagonal_ris(Eigen::Index m, Rng& rng)
{
    if (m < 1) throw DimensionError("random_diagonal_ris: size must be >= 1");
    CVector phases(m);
    for (Eigen::Index i = 0; i < m; ++i) phases(i) = std::polar(1.0, 2.0 * kPi * rng.uniform());
    ScatteringMatrix out;
    out.architecture = Architecture::Diagonal;
    out.entries = phases.asDiagonal();
    return out;
}

} // namespace bdris
