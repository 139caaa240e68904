#ifndef BDRIS_LINALG_HPP
#define BDRIS_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "bdris/errors.hpp"
#include "bdris/rng.hpp"

namespace bdris {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kDefaultRankRtol = 1e-8;

inline bool all_finite(const CMat& a) { return a.allFinite(); }

/// Full SVD, A = U * diag_embed(s) * V^H with U (m x m), V (n x n) unitary
/// and s nonincreasing.
struct SvdResult {
    CMat U;
    RVec singular_values;
    CMat V;

    /// Embeds the singular values into the m x n rectangular diagonal.
    CMat sigma() const {
        CMat s = CMat::Zero(U.rows(), V.rows());
        for (Eigen::Index i = 0; i < singular_values.size(); ++i)
            s(i, i) = singular_values(i);
        return s;
    }
};

inline SvdResult svd(const CMat& a) {
    if (a.rows() == 0 || a.cols() == 0)
        throw ConfigError("svd: empty matrix");
    if (!all_finite(a))
        throw NumericalError("svd: non-finite input");
    Eigen::JacobiSVD<CMat> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success)
        throw NumericalError("svd: decomposition failed to converge");
    SvdResult r{dec.matrixU(), dec.singularValues(), dec.matrixV()};
    if (!all_finite(r.U) || !all_finite(r.V) || !r.singular_values.allFinite())
        throw NumericalError("svd: non-finite output");
    return r;
}

/// Number of singular values above rtol * sigma_max. Zero matrix -> 0.
inline int numerical_rank(const CMat& a, double rtol = kDefaultRankRtol) {
    if (rtol <= 0.0 || rtol >= 1.0)
        throw ConfigError("numerical_rank: rtol must lie in (0,1)");
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<CMat> dec(a);
    const auto& s = dec.singularValues();
    if (s.size() == 0 || s(0) <= 0.0) return 0;
    const double cut = rtol * s(0);
    int r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return r;
}

/// Kronecker product, (m_a*m_b) x (n_a*n_b).
inline CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Column-stacking vectorization.
inline CVec vec(const CMat& a) {
    return Eigen::Map<const CVec>(a.data(), a.size());
}

inline CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols)
        throw ConfigError("unvec: size mismatch");
    return Eigen::Map<const CMat>(v.data(), rows, cols);
}

/// Haar-distributed n x n unitary: QR of a standard complex Gaussian matrix
/// with the phase gauge fixed (diagonal of R made real-positive), so the
/// result is a deterministic function of the rng state.
inline CMat haar_unitary(int n, Rng& rng) {
    if (n < 1) throw ConfigError("haar_unitary: n must be >= 1");
    CMat a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            a(i, j) = standard_cgauss(rng);
    Eigen::HouseholderQR<CMat> qr(a);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx d = r(i, i);
        const double m = std::abs(d);
        q.col(i) *= (m > 0.0) ? d / m : cplx(1.0, 0.0);
    }
    return q;
}

/// n x n unitary whose first column equals the given unit vector; the
/// remaining columns span the orthogonal complement.
inline CMat orthonormal_completion(const CVec& first_col) {
    const Eigen::Index n = first_col.size();
    if (n < 1) throw ConfigError("orthonormal_completion: empty vector");
    const double nrm = first_col.norm();
    if (std::abs(nrm - 1.0) > 1e-10)
        throw ConfigError("orthonormal_completion: input must have unit norm");
    Eigen::HouseholderQR<CMat> qr(first_col);
    CMat q = qr.householderQ();
    const cplx r11 = qr.matrixQR()(0, 0); // first_col = q.col(0) * r11
    const double m = std::abs(r11);
    q.col(0) *= (m > 0.0) ? r11 / m : cplx(1.0, 0.0);
    return q;
}

enum class LsForm {
    LeastSquares, // a tall / full column rank: unique minimizer of ||a x - y||
    MinNorm       // a wide / full row rank: minimum-norm solution of a x = y
};

/// Rank-revealing least-squares solve via complete orthogonal decomposition.
/// Throws SingularSystemError when the rank expected for the chosen form
/// does not hold at the given relative tolerance.
inline CMat ls_solve(const CMat& a, const CMat& y, LsForm form = LsForm::LeastSquares,
                     double rtol = kDefaultRankRtol) {
    if (a.rows() != y.rows())
        throw ConfigError("ls_solve: dimension mismatch");
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(a);
    cod.setThreshold(rtol);
    const Eigen::Index need =
        form == LsForm::LeastSquares ? a.cols() : a.rows();
    if (cod.rank() < need)
        throw SingularSystemError("ls_solve: system rank " + std::to_string(cod.rank()) +
                                  " below required " + std::to_string(need));
    CMat x = cod.solve(y);
    if (!all_finite(x))
        throw NumericalError("ls_solve: non-finite solution");
    return x;
}

/// Solves X A = Y in the least-squares sense, matching the closed form
/// Y A^H (A A^H)^{-1} when A has full row rank.
inline CMat ls_solve_right(const CMat& a, const CMat& y, double rtol = kDefaultRankRtol) {
    return ls_solve(a.adjoint(), y.adjoint(), LsForm::LeastSquares, rtol).adjoint();
}

} // namespace bdris

#endif
