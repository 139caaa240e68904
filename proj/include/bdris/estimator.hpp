#ifndef BDRIS_ESTIMATOR_HPP
#define BDRIS_ESTIMATOR_HPP

#include <limits>
#include <optional>
#include <vector>

#include "bdris/schedule.hpp"

namespace bdris {

/// Raw BS observations of one phase, in frame order.
struct PhaseObservations {
    int phase = 0;
    std::vector<CVec> raw;
};

struct PhaseResidual {
    int phase = 0;
    double relative_residual = 0.0;
};

struct EstimationResult {
    std::optional<CanonicalFactors> factors_hat; // absent for the benchmark scheme
    CascadedChannels J_hat;
    int q2_detected = 0;
    int f_detected = 0;
    double nmse = std::numeric_limits<double>::quiet_NaN();
    std::vector<PhaseResidual> per_phase_residuals;
};

inline PhaseObservations simulate_phase(const ChannelSet& ch, const PhasePlan& plan, double p,
                                        double sigma2, Rng& rng) {
    PhaseObservations obs;
    obs.phase = plan.phase;
    obs.raw.reserve(plan.frames.size());
    for (const auto& fr : plan.frames)
        obs.raw.push_back(received_signal(ch, fr, p, sigma2, rng));
    return obs;
}

namespace detail {

inline void check_obs(const PhaseObservations& obs, const PhasePlan& plan) {
    if (obs.phase != plan.phase || obs.raw.size() != plan.frames.size())
        throw ConfigError("observations do not match plan");
}

inline double rel_residual(double err, double ref) {
    return err / std::max(ref, std::numeric_limits<double>::min());
}

} // namespace detail

// --- effective-signal constructions ------------------------------------------

/// Design matrix of Phase I/III reference estimation: columns are the common
/// pilot scalar times the perturbed first scattering column.
inline CMat design_matrix_reference(const PhasePlan& plan) {
    const int tlen = plan.part_len;
    const bool surface1 = plan.phase == 3;
    const Eigen::Index m = surface1 ? plan.frames[0].phi1.rows() : plan.frames[0].phi2.rows();
    CMat a(m, tlen);
    for (int t = 0; t < tlen; ++t) {
        const PilotFrame& fr = plan.frames[t];
        a.col(t) = fr.x(0) * (surface1 ? fr.phi1.col(0) : fr.phi2.col(0));
    }
    return a;
}

/// Phase I four-part combination (y1+y2)/2 - (y3+y4)/2, which cancels both
/// BD-RIS 1 links and leaves c_theta * x * Qbar2 * [Phi2]_{:,1} per column.
inline std::pair<CMat, CMat> combine_phase1(const PhaseObservations& obs, const PhasePlan& plan) {
    detail::check_obs(obs, plan);
    const int tlen = plan.part_len;
    CMat ybar(obs.raw[0].size(), tlen);
    for (int t = 0; t < tlen; ++t)
        ybar.col(t) = 0.5 * (obs.raw[t] + obs.raw[tlen + t]) -
                      0.5 * (obs.raw[2 * tlen + t] + obs.raw[3 * tlen + t]);
    return {ybar, design_matrix_reference(plan)};
}

/// Phase III uses the identical combination with the roles of the surfaces
/// swapped inside the plan.
inline std::pair<CMat, CMat> combine_phase3(const PhaseObservations& obs, const PhasePlan& plan) {
    return combine_phase1(obs, plan);
}

/// LS recovery of a reference channel from Ybar = c_theta * Q * A (+ noise),
/// via the right-inverse form Q = c^-1 Ybar A^H (A A^H)^-1.
inline CMat estimate_reference(const CMat& ybar, const CMat& a, cplx c_theta,
                               double rtol = kDefaultRankRtol) {
    return ls_solve_right(a, ybar, rtol) / c_theta;
}

inline CMat estimate_Q2(const CMat& ybar1, const CMat& a1, cplx c_theta,
                        double rtol = kDefaultRankRtol) {
    return estimate_reference(ybar1, a1, c_theta, rtol);
}

inline CMat estimate_Q1(const PhaseObservations& obs3, const PhasePlan& plan3,
                        double rtol = kDefaultRankRtol) {
    const auto [ybar, a] = combine_phase3(obs3, plan3);
    return estimate_reference(ybar, a, plan3.c_theta, rtol);
}

/// Stacked design matrix of Phase II, rows x_t^T kron (Q2hat * Phi2_t).
inline CMat design_matrix_phase2(const CMat& q2hat, const PhasePlan& plan) {
    const int tlen = plan.part_len;
    const Eigen::Index L = q2hat.rows();
    const Eigen::Index cols = plan.frames[0].x.size() * q2hat.cols();
    CMat a(L * tlen, cols);
    for (int t = 0; t < tlen; ++t)
        a.middleRows(t * L, L) =
            kron(plan.frames[t].x.transpose(), q2hat * plan.frames[t].phi2);
    return a;
}

/// Phase II two-part average, cancelling everything that passes BD-RIS 1.
inline CVec combine_phase2(const PhaseObservations& obs, const PhasePlan& plan) {
    detail::check_obs(obs, plan);
    const int tlen = plan.part_len;
    const Eigen::Index L = obs.raw[0].size();
    CVec y(L * tlen);
    for (int t = 0; t < tlen; ++t)
        y.segment(t * L, L) = 0.5 * (obs.raw[t] + obs.raw[tlen + t]);
    return y;
}

/// LS recovery of the BD-RIS 2 user coefficients; the leading entry of the
/// solution vector is discarded (it is pinned by the gauge constraint).
inline CVec estimate_r2(const PhaseObservations& obs2, const PhasePlan& plan2,
                        const CMat& q2hat, double p, double rtol = kDefaultRankRtol,
                        double* residual = nullptr) {
    const CMat a = design_matrix_phase2(q2hat, plan2);
    const CVec y = combine_phase2(obs2, plan2);
    const CVec v = ls_solve(a, y, LsForm::LeastSquares, rtol) / std::sqrt(p);
    if (residual)
        *residual = detail::rel_residual((a * v * std::sqrt(p) - y).norm(), y.norm());
    return v.tail(v.size() - 1);
}

/// Stacked design matrix of Phase IV, rows x_t [Phi1_t]_{:,1}^T kron (Q2hat Phi2_t).
inline CMat design_matrix_phase4(const CMat& q2hat, const PhasePlan& plan) {
    const int tlen = plan.part_len;
    const Eigen::Index L = q2hat.rows();
    const Eigen::Index M1 = plan.frames[0].phi1.rows();
    CMat a(L * tlen, M1 * q2hat.cols());
    for (int t = 0; t < tlen; ++t) {
        const PilotFrame& fr = plan.frames[t];
        a.middleRows(t * L, L) =
            fr.x(0) * kron(fr.phi1.col(0).transpose(), q2hat * fr.phi2);
    }
    return a;
}

/// Phase IV effective signal: part difference minus the (estimated)
/// single-reflection BD-RIS 1 term, leaving the double-reflection link only.
inline CVec combine_phase4(const PhaseObservations& obs, const PhasePlan& plan,
                           const CMat& q1hat) {
    detail::check_obs(obs, plan);
    const int tlen = plan.part_len;
    const Eigen::Index L = obs.raw[0].size();
    CVec y(L * tlen);
    for (int t = 0; t < tlen; ++t) {
        const PilotFrame& fr = plan.frames[t];
        y.segment(t * L, L) = obs.raw[t] - obs.raw[tlen + t] -
                              plan.c_theta * fr.x(0) * (q1hat * fr.phi1.col(0));
    }
    return y;
}

inline CMat estimate_B(const PhaseObservations& obs4, const PhasePlan& plan4,
                       const CMat& q1hat, const CMat& q2hat,
                       double rtol = kDefaultRankRtol, double* residual = nullptr) {
    const CMat a = design_matrix_phase4(q2hat, plan4);
    const CVec y = combine_phase4(obs4, plan4, q1hat);
    const CVec b = ls_solve(a, y, LsForm::LeastSquares, rtol) / plan4.c_theta;
    if (residual)
        *residual = detail::rel_residual((a * b * plan4.c_theta - y).norm(), y.norm());
    return unvec(b, q2hat.cols(), plan4.frames[0].phi1.rows());
}

/// Stacked design matrix of Phase V, rows x_t^T kron (Fhat * Phi1_t) with
/// Fhat = Q1hat + Q2hat * Phi2 * Bhat.
inline CMat design_matrix_phase5(const CMat& fhat, const PhasePlan& plan) {
    const int tlen = plan.part_len;
    const Eigen::Index L = fhat.rows();
    CMat a(L * tlen, plan.frames[0].x.size() * fhat.cols());
    for (int t = 0; t < tlen; ++t)
        a.middleRows(t * L, L) =
            kron(plan.frames[t].x.transpose(), fhat * plan.frames[t].phi1);
    return a;
}

/// Phase V effective signal: observations minus the estimated BD-RIS 2
/// single-reflection contribution sqrt(p) * Q2hat * Phi2 * R2hat * x_t.
inline CVec combine_phase5(const PhaseObservations& obs, const PhasePlan& plan,
                           const CMat& q2hat, const CMat& r2hat_full, double p) {
    detail::check_obs(obs, plan);
    const int tlen = plan.part_len;
    const Eigen::Index L = obs.raw[0].size();
    const double sp = std::sqrt(p);
    CVec y(L * tlen);
    for (int t = 0; t < tlen; ++t) {
        const PilotFrame& fr = plan.frames[t];
        y.segment(t * L, L) =
            obs.raw[t] - sp * (q2hat * (fr.phi2 * (r2hat_full * fr.x)));
    }
    return y;
}

inline CVec estimate_r1(const PhaseObservations& obs5, const PhasePlan& plan5,
                        const CMat& q1hat, const CMat& q2hat, const CMat& bhat,
                        const CMat& r2hat_full, double p, double rtol = kDefaultRankRtol,
                        double* residual = nullptr) {
    const CMat fhat = q1hat + q2hat * plan5.frames[0].phi2 * bhat;
    const CMat a = design_matrix_phase5(fhat, plan5);
    const CVec y = combine_phase5(obs5, plan5, q2hat, r2hat_full, p);
    const CVec v = ls_solve(a, y, LsForm::LeastSquares, rtol) / std::sqrt(p);
    if (residual)
        *residual = detail::rel_residual((a * v * std::sqrt(p) - y).norm(), y.norm());
    return v.tail(v.size() - 1);
}

// --- end-to-end pipeline --------------------------------------------------------

/// Per-phase part lengths (tau_{1,1}, tau_{2,1}, tau_{3,1}, tau_{4,1}, tau_5);
/// zero entries mean "use the identifiability minimum".
struct PhaseLengths {
    int tau11 = 0;
    int tau21 = 0;
    int tau31 = 0;
    int tau41 = 0;
    int tau5 = 0;

    long total() const { return 4L * tau11 + 2L * tau21 + 4L * tau31 + 2L * tau41 + tau5; }
};

struct PipelineOptions {
    bool noiseless = false;
    PhaseLengths lengths{};
    ReferenceMode reference = ReferenceMode::Sum;
    bool randomize_pilot_phase = false;
};

/// Runs the five phases in dependency order (each design consumes the
/// previous estimates), reconstructs all cascaded channels and scores them
/// against the ground truth carried by `ch`.
inline EstimationResult run_pipeline(const SystemConfig& cfg, const ChannelSet& ch,
                                     const PipelineOptions& opt, Rng& rng) {
    const double p = cfg.p_watt();
    const double sigma2 = opt.noiseless ? 0.0 : cfg.sigma2_watt();
    const double rtol = cfg.rank_rtol;
    const PlanOptions popt{opt.reference, opt.randomize_pilot_phase};

    EstimationResult out;

    // Phase I: reference channel of BD-RIS 2.
    const PhasePlan plan1 = plan_phase1(cfg, cfg.theta, opt.lengths.tau11, popt, rng);
    const PhaseObservations obs1 = simulate_phase(ch, plan1, p, sigma2, rng);
    const auto [ybar1, a1] = combine_phase1(obs1, plan1);
    const CMat q2hat = estimate_Q2(ybar1, a1, plan1.c_theta, rtol);
    out.per_phase_residuals.push_back(
        {1, detail::rel_residual((plan1.c_theta * q2hat * a1 - ybar1).norm(), ybar1.norm())});

    // Phase II: BD-RIS 2 user coefficients.
    const PhasePlan plan2 = plan_phase2(cfg, q2hat, opt.lengths.tau21, popt, rng);
    const PhaseObservations obs2 = simulate_phase(ch, plan2, p, sigma2, rng);
    double res2 = 0.0;
    const CVec rbar2 = estimate_r2(obs2, plan2, q2hat, p, rtol, &res2);
    out.per_phase_residuals.push_back({2, res2});
    out.q2_detected = plan2.q2;

    // Phase III: reference channel of BD-RIS 1.
    const PhasePlan plan3 = plan_phase3(cfg, cfg.theta, opt.lengths.tau31, popt, rng);
    const PhaseObservations obs3 = simulate_phase(ch, plan3, p, sigma2, rng);
    const auto [ybar3, a3] = combine_phase3(obs3, plan3);
    const CMat q1hat = estimate_reference(ybar3, a3, plan3.c_theta, rtol);
    out.per_phase_residuals.push_back(
        {3, detail::rel_residual((plan3.c_theta * q1hat * a3 - ybar3).norm(), ybar3.norm())});

    // Phase IV: inter-surface channel.
    const PhasePlan plan4 = plan_phase4(cfg, q2hat, opt.lengths.tau41, popt, rng);
    const PhaseObservations obs4 = simulate_phase(ch, plan4, p, sigma2, rng);
    double res4 = 0.0;
    const CMat bhat = estimate_B(obs4, plan4, q1hat, q2hat, rtol, &res4);
    out.per_phase_residuals.push_back({4, res4});

    // Phase V: BD-RIS 1 user coefficients.
    const PhasePlan plan5 = plan_phase5(cfg, q1hat, q2hat, bhat, opt.lengths.tau5, popt, rng);
    const PhaseObservations obs5 = simulate_phase(ch, plan5, p, sigma2, rng);
    const CMat r2full = rbar_matrix(rbar2, cfg.M2, cfg.K, opt.reference);
    double res5 = 0.0;
    const CVec rbar1 =
        estimate_r1(obs5, plan5, q1hat, q2hat, bhat, r2full, p, rtol, &res5);
    out.per_phase_residuals.push_back({5, res5});
    out.f_detected = plan5.f;

    CanonicalFactors fh;
    fh.Qbar1 = q1hat;
    fh.Qbar2 = q2hat;
    fh.Bbar = bhat;
    fh.rbar1 = rbar1;
    fh.rbar2 = rbar2;
    out.factors_hat = fh;
    out.J_hat = reconstruct(fh, cfg.K, opt.reference);
    out.nmse = nmse(cascaded_all(ch), out.J_hat);
    return out;
}

/// Convenience overload drawing the channel realization itself.
inline EstimationResult run_pipeline(const SystemConfig& cfg, const PipelineOptions& opt,
                                     Rng& rng) {
    const ChannelSet ch = generate_channels(cfg, rng);
    return run_pipeline(cfg, ch, opt, rng);
}

// --- naive full-LS benchmark ------------------------------------------------------

/// Treats every cascaded-channel entry as an independent unknown: stacks T
/// observations with Haar scattering matrices and random unit-modulus pilots
/// and solves one linear system per BS antenna (minimum-norm when
/// underdetermined). Needs T >= K(M1^2 + M2^2 + M1^2 M2^2) to be identifiable.
inline EstimationResult benchmark_full_ls(const SystemConfig& cfg, const ChannelSet& ch, int T,
                                          bool noiseless, Rng& rng,
                                          long unknown_cap = 2'000'000) {
    const long m1 = cfg.M1, m2 = cfg.M2;
    const long per_user = m1 * m1 + m2 * m2 + m1 * m1 * m2 * m2;
    const long n_cols = cfg.K * per_user;
    if (n_cols * cfg.L > unknown_cap)
        throw ConfigError("benchmark_full_ls: unknown count exceeds cap");
    if (T < 1)
        throw ConfigError("benchmark_full_ls: need T >= 1");

    const double p = cfg.p_watt();
    const double sp = std::sqrt(p);
    const double sigma2 = noiseless ? 0.0 : cfg.sigma2_watt();

    CMat a(T, n_cols);
    CMat y(T, cfg.L);
    for (int t = 0; t < T; ++t) {
        PilotFrame fr;
        fr.x = CVec(cfg.K);
        for (int k = 0; k < cfg.K; ++k) {
            const double ang = uniform_angle(rng);
            fr.x(k) = cplx(std::cos(ang), std::sin(ang));
        }
        fr.phi1 = haar_unitary(cfg.M1, rng);
        fr.phi2 = haar_unitary(cfg.M2, rng);

        const CVec v1 = vec(fr.phi1);
        const CVec v2 = vec(fr.phi2);
        const CVec v12 = vec(kron(fr.phi1.transpose(), fr.phi2));
        for (int k = 0; k < cfg.K; ++k) {
            const cplx w = sp * fr.x(k);
            long off = k * per_user;
            a.row(t).segment(off, v1.size()) = w * v1.transpose();
            a.row(t).segment(off + v1.size(), v2.size()) = w * v2.transpose();
            a.row(t).segment(off + v1.size() + v2.size(), v12.size()) = w * v12.transpose();
        }
        y.row(t) = received_signal(ch, fr, p, sigma2, rng).transpose();
    }

    const LsForm form = T >= n_cols ? LsForm::LeastSquares : LsForm::MinNorm;
    const CMat u = ls_solve(a, y, form, cfg.rank_rtol); // n_cols x L

    EstimationResult out;
    for (int k = 0; k < cfg.K; ++k) {
        const long off = k * per_user;
        out.J_hat.J1.push_back(u.middleRows(off, m1 * m1).transpose());
        out.J_hat.J2.push_back(u.middleRows(off + m1 * m1, m2 * m2).transpose());
        out.J_hat.J12.push_back(u.middleRows(off + m1 * m1 + m2 * m2, m1 * m1 * m2 * m2).transpose());
    }
    out.nmse = nmse(cascaded_all(ch), out.J_hat);
    out.per_phase_residuals.push_back(
        {0, detail::rel_residual((a * u - y).norm(), y.norm())});
    return out;
}

} // namespace bdris

#endif
