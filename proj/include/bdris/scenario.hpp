#ifndef BDRIS_SCENARIO_HPP
#define BDRIS_SCENARIO_HPP

#include <cmath>
#include <vector>

#include "bdris/config.hpp"
#include "bdris/linalg.hpp"

namespace bdris {

/// Which gauge anchors the scaled-reference decomposition.
///   Sum:         c_i = sum_k r_{i,k,1}   (all users transmit during reference phases)
///   TypicalUser: c_i = r_{i,1,1}         (users 2..K stay silent during reference phases)
enum class ReferenceMode { Sum, TypicalUser };

/// Ground-truth physical channels of one coherence block.
struct ChannelSet {
    CMat G1; // L x M1, BD-RIS 1 -> BS
    CMat G2; // L x M2, BD-RIS 2 -> BS
    CMat B;  // M2 x M1, BD-RIS 1 -> BD-RIS 2
    CMat R1; // M1 x K, users -> BD-RIS 1
    CMat R2; // M2 x K, users -> BD-RIS 2
    std::vector<Pos2> user_positions;

    int K() const { return static_cast<int>(R1.cols()); }
    int L() const { return static_cast<int>(G1.rows()); }
    int M1() const { return static_cast<int>(G1.cols()); }
    int M2() const { return static_cast<int>(G2.cols()); }
};

/// The five low-dimensional factors that determine every cascaded channel,
/// plus the gauge scalars (diagnostic only; they cancel in reconstruction).
struct CanonicalFactors {
    CMat Qbar1; // L x M1
    CMat Qbar2; // L x M2
    CMat Bbar;  // M2 x M1
    CVec rbar1; // length K*M1 - 1, user-major, entry (k=1, m=1) omitted
    CVec rbar2; // length K*M2 - 1
    cplx c1{0.0, 0.0};
    cplx c2{0.0, 0.0};
};

/// All cascaded channels of one scenario, block order as produced by the
/// Kronecker expansions (column-major vec(B) outer, then user-channel entry,
/// then the shared surface-to-BS matrix).
struct CascadedChannels {
    std::vector<CMat> J1;  // K entries, each L x M1^2
    std::vector<CMat> J2;  // K entries, each L x M2^2
    std::vector<CMat> J12; // K entries, each L x (M1^2 * M2^2)
};

/// One time instant of the pilot schedule: per-user pilots and both
/// scattering matrices. Pilot magnitudes are 0 (silent) or 1.
struct PilotFrame {
    CVec x;    // length K
    CMat phi1; // M1 x M1 unitary
    CMat phi2; // M2 x M2 unitary
};

// --- channel synthesis ------------------------------------------------------

namespace detail {

inline CMat cgauss_matrix(Eigen::Index rows, Eigen::Index cols, double variance, Rng& rng) {
    const double s = std::sqrt(variance);
    CMat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = s * standard_cgauss(rng);
    return m;
}

inline Pos2 uniform_disk_point(const Pos2& center, double radius, Rng& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double ang = uniform_angle(rng);
    const double rad = radius * std::sqrt(u01(rng));
    return {center[0] + rad * std::cos(ang), center[1] + rad * std::sin(ang)};
}

} // namespace detail

/// Draws one channel realization: i.i.d. CSCG entries with per-link variance
/// beta0 * d^-alpha, user positions uniform over the configured disk.
/// Redraws the user-side channels on the measure-zero event that a gauge
/// scalar sum_k r_{i,k,1} vanishes.
inline ChannelSet generate_channels(const SystemConfig& cfg, Rng& rng) {
    cfg.validate();
    ChannelSet ch;
    ch.G1 = detail::cgauss_matrix(cfg.L, cfg.M1, cfg.beta_r1_bs(), rng);
    ch.G2 = detail::cgauss_matrix(cfg.L, cfg.M2, cfg.beta_r2_bs(), rng);
    ch.B = detail::cgauss_matrix(cfg.M2, cfg.M1, cfg.beta_r1_r2(), rng);

    constexpr int kMaxRedraws = 64;
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        ch.user_positions.clear();
        ch.R1.resize(cfg.M1, cfg.K);
        ch.R2.resize(cfg.M2, cfg.K);
        for (int k = 0; k < cfg.K; ++k) {
            const Pos2 pos = detail::uniform_disk_point(cfg.user_center, cfg.user_radius, rng);
            ch.user_positions.push_back(pos);
            ch.R1.col(k) = detail::cgauss_matrix(cfg.M1, 1, cfg.beta_user_ris(pos, 1), rng);
            ch.R2.col(k) = detail::cgauss_matrix(cfg.M2, 1, cfg.beta_user_ris(pos, 2), rng);
        }
        const cplx c1 = ch.R1.row(0).sum();
        const cplx c2 = ch.R2.row(0).sum();
        if (std::abs(c1) > 1e-14 * ch.R1.norm() && std::abs(c2) > 1e-14 * ch.R2.norm())
            return ch;
    }
    throw NumericalError("generate_channels: gauge scalar kept vanishing across redraws");
}

// --- cascaded channels ------------------------------------------------------

/// Single-reflection cascaded channel J_{i,k} = r_{i,k}^T kron G_i.
inline CMat cascaded_single(const ChannelSet& ch, int surface, int k) {
    const CMat& g = surface == 1 ? ch.G1 : ch.G2;
    const CMat& r = surface == 1 ? ch.R1 : ch.R2;
    return kron(r.col(k).transpose(), g);
}

/// Double-reflection cascaded channel
/// J_{1,2,k} = vec^T(B) kron r_{1,k}^T kron G_2.
inline CMat cascaded_double(const ChannelSet& ch, int k) {
    const CMat row = kron(vec(ch.B).transpose(), ch.R1.col(k).transpose());
    return kron(row, ch.G2);
}

inline CascadedChannels cascaded_all(const ChannelSet& ch) {
    CascadedChannels out;
    for (int k = 0; k < ch.K(); ++k) {
        out.J1.push_back(cascaded_single(ch, 1, k));
        out.J2.push_back(cascaded_single(ch, 2, k));
        out.J12.push_back(cascaded_double(ch, k));
    }
    return out;
}

// --- canonical decomposition ------------------------------------------------

namespace detail {

inline CVec drop_first(const CVec& v) { return v.tail(v.size() - 1); }

} // namespace detail

/// Extracts the five canonical factors from ground-truth channels in the
/// requested gauge. Throws if a gauge scalar is (numerically) zero.
inline CanonicalFactors canonical_factors(const ChannelSet& ch,
                                          ReferenceMode mode = ReferenceMode::Sum) {
    CanonicalFactors f;
    f.c1 = mode == ReferenceMode::Sum ? cplx(ch.R1.row(0).sum()) : ch.R1(0, 0);
    f.c2 = mode == ReferenceMode::Sum ? cplx(ch.R2.row(0).sum()) : ch.R2(0, 0);
    if (std::abs(f.c1) <= 1e-14 * ch.R1.norm() || std::abs(f.c2) <= 1e-14 * ch.R2.norm())
        throw NumericalError("canonical_factors: degenerate gauge scalar");
    f.Qbar1 = f.c1 * ch.G1;
    f.Qbar2 = f.c2 * ch.G2;
    f.Bbar = (f.c1 / f.c2) * ch.B;
    f.rbar1 = detail::drop_first(vec(ch.R1 / f.c1));
    f.rbar2 = detail::drop_first(vec(ch.R2 / f.c2));
    return f;
}

/// Rebuilds the full M x K coefficient matrix from the stored vector,
/// recomputing the omitted (1,1) entry from the gauge constraint:
/// sum_k rbar_{k,1} = 1 in the Sum gauge, rbar_{1,1} = 1 in TypicalUser.
inline CMat rbar_matrix(const CVec& rbar, int M, int K, ReferenceMode mode) {
    if (rbar.size() != static_cast<Eigen::Index>(M) * K - 1)
        throw ConfigError("rbar_matrix: vector length mismatch");
    CVec full(static_cast<Eigen::Index>(M) * K);
    full.tail(full.size() - 1) = rbar;
    CMat R = unvec(full, M, K);
    if (mode == ReferenceMode::Sum) {
        cplx s(0.0, 0.0);
        for (int k = 1; k < K; ++k) s += R(0, k);
        R(0, 0) = cplx(1.0, 0.0) - s;
    } else {
        R(0, 0) = cplx(1.0, 0.0);
    }
    return R;
}

/// Assembles all cascaded channels from canonical factors.
inline CascadedChannels reconstruct(const CanonicalFactors& f, int K,
                                    ReferenceMode mode = ReferenceMode::Sum) {
    const int M1 = static_cast<int>(f.Qbar1.cols());
    const int M2 = static_cast<int>(f.Qbar2.cols());
    const CMat R1 = rbar_matrix(f.rbar1, M1, K, mode);
    const CMat R2 = rbar_matrix(f.rbar2, M2, K, mode);
    const CMat vb = vec(f.Bbar).transpose();
    CascadedChannels out;
    for (int k = 0; k < K; ++k) {
        out.J1.push_back(kron(R1.col(k).transpose(), f.Qbar1));
        out.J2.push_back(kron(R2.col(k).transpose(), f.Qbar2));
        out.J12.push_back(kron(kron(vb, R1.col(k).transpose()), f.Qbar2));
    }
    return out;
}

// --- received signal ---------------------------------------------------------

/// One BS observation y = sum_k sqrt(p) x_k (G1 Phi1 r1k + G2 Phi2 r2k
/// + G2 Phi2 B Phi1 r1k) + z with z ~ CN(0, sigma2 I). sigma2 = 0 returns
/// the exact noiseless output and leaves the rng untouched.
inline CVec received_signal(const ChannelSet& ch, const PilotFrame& frame, double p,
                            double sigma2, Rng& rng) {
    const int M1 = ch.M1();
    const int M2 = ch.M2();
    if (frame.x.size() != ch.K() || frame.phi1.rows() != M1 || frame.phi1.cols() != M1 ||
        frame.phi2.rows() != M2 || frame.phi2.cols() != M2)
        throw ConfigError("received_signal: frame dimensions do not match channels");
    const double u1 = (frame.phi1.adjoint() * frame.phi1 - CMat::Identity(M1, M1)).norm();
    const double u2 = (frame.phi2.adjoint() * frame.phi2 - CMat::Identity(M2, M2)).norm();
    if (u1 > 1e-8 * std::sqrt(double(M1)) || u2 > 1e-8 * std::sqrt(double(M2)))
        throw ConfigError("received_signal: scattering matrix is not unitary");

    const CVec s1 = ch.R1 * frame.x; // sum_k x_k r_{1,k}
    const CVec s2 = ch.R2 * frame.x;
    CVec y = std::sqrt(p) *
             (ch.G1 * (frame.phi1 * s1) + ch.G2 * (frame.phi2 * s2) +
              ch.G2 * (frame.phi2 * (ch.B * (frame.phi1 * s1))));
    if (sigma2 > 0.0) {
        const double sn = std::sqrt(sigma2);
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += sn * standard_cgauss(rng);
    }
    return y;
}

// --- metric -------------------------------------------------------------------

/// Normalized mean-squared error of one reconstruction,
/// sum_k ||J_k - Jhat_k||_F^2 / sum_k ||J_k||_F^2 over all three link types.
inline double nmse(const CascadedChannels& truth, const CascadedChannels& est) {
    if (truth.J1.size() != est.J1.size() || truth.J2.size() != est.J2.size() ||
        truth.J12.size() != est.J12.size())
        throw ConfigError("nmse: user-count mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < truth.J1.size(); ++k) {
        num += (truth.J1[k] - est.J1[k]).squaredNorm() +
               (truth.J2[k] - est.J2[k]).squaredNorm() +
               (truth.J12[k] - est.J12[k]).squaredNorm();
        den += truth.J1[k].squaredNorm() + truth.J2[k].squaredNorm() +
               truth.J12[k].squaredNorm();
    }
    if (den <= 0.0)
        throw NumericalError("nmse: true channels have zero energy");
    return num / den;
}

} // namespace bdris

#endif
