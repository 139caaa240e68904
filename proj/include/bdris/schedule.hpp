#ifndef BDRIS_SCHEDULE_HPP
#define BDRIS_SCHEDULE_HPP

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "bdris/scenario.hpp"

namespace bdris {

inline int ceil_div(long a, long b) { return static_cast<int>((a + b - 1) / b); }

/// Options shared by all phase planners.
struct PlanOptions {
    ReferenceMode reference = ReferenceMode::Sum;
    // The schedule only needs unit-power pilot scalars; randomizing their
    // phases exercises the estimators' insensitivity to that choice.
    bool randomize_pilot_phase = false;
};

/// Combinatorial assignment of N items (users or surface elements) to
/// overlapping time-support sets, making the stacked design matrix full
/// column rank with ceil(N*M/q) slots. Shared by Phases II, IV and V.
struct GroupedDesign {
    int N = 0, M = 0, q = 0, tau = 0;
    int base = 0; // smallest integer making tau0 = M*base/q an integer
    int tau0 = 0;
    int eta = 0;
    std::vector<int> group_sizes;                       // eta+1 entries, last may be 0
    std::vector<std::vector<int>> index_sets;           // 0-based item indices
    std::vector<int> time_sizes;                        // sums to tau
    std::vector<std::vector<int>> time_sets;            // 0-based slots, contiguous
    std::vector<std::vector<std::vector<int>>> support_sets; // [group][j] -> slots

    /// Group index and rank-within-group of a slot.
    std::pair<int, int> locate(int slot) const {
        int offset = 0;
        for (std::size_t n = 0; n < time_sizes.size(); ++n) {
            if (slot < offset + time_sizes[n]) return {static_cast<int>(n), slot - offset};
            offset += time_sizes[n];
        }
        throw ConfigError("GroupedDesign::locate: slot out of range");
    }

    bool active(int group, int j, int r) const {
        const auto& s = support_sets[group][j];
        return std::binary_search(s.begin(), s.end(), r);
    }

    int active_count(int group, int r) const {
        int c = 0;
        for (std::size_t j = 0; j < support_sets[group].size(); ++j)
            if (active(group, static_cast<int>(j), r)) ++c;
        return c;
    }
};

inline GroupedDesign grouped_design(int N, int M, int q, int tau) {
    if (q < 1 || q > M)
        throw ConfigError("grouped_design: need 1 <= q <= M");
    if (N < 1)
        throw ConfigError("grouped_design: need N >= 1");
    if (tau < ceil_div(static_cast<long>(N) * M, q))
        throw ConfigError("grouped_design: horizon below ceil(N*M/q)");

    GroupedDesign g;
    g.N = N; g.M = M; g.q = q; g.tau = tau;
    g.base = q / std::gcd(M, q);
    g.tau0 = static_cast<int>(static_cast<long>(M) * g.base / q);
    g.eta = N / g.base;

    for (int n = 0; n < g.eta + 1; ++n) {
        const int size = n < g.eta ? g.base : N - g.eta * g.base;
        g.group_sizes.push_back(size);
        std::vector<int> idx(size);
        for (int j = 0; j < size; ++j) idx[j] = n * g.base + j;
        g.index_sets.push_back(std::move(idx));

        g.time_sizes.push_back(n < g.eta ? g.tau0 : tau - g.eta * g.tau0);

        std::vector<std::vector<int>> supports;
        for (int j = 0; j < size; ++j) {
            // slot range {1..ceil(M/q)} for the first item, then
            // {ceil(j*M/q)..ceil((j+1)*M/q)} (1-based); adjacent items may
            // share a boundary slot.
            const int lo = j == 0 ? 0 : ceil_div(static_cast<long>(j) * M, q) - 1;
            const int hi = ceil_div(static_cast<long>(j + 1) * M, q) - 1;
            std::vector<int> s;
            for (int r = lo; r <= hi; ++r) s.push_back(r);
            supports.push_back(std::move(s));
        }
        g.support_sets.push_back(std::move(supports));
    }
    int offset = 0;
    for (int n = 0; n < g.eta + 1; ++n) {
        std::vector<int> t(g.time_sizes[n]);
        for (int r = 0; r < g.time_sizes[n]; ++r) t[r] = offset + r;
        offset += g.time_sizes[n];
        g.time_sets.push_back(std::move(t));
    }
    return g;
}

/// One phase of the pilot schedule, frames materialized eagerly.
struct PhasePlan {
    int phase = 0;
    std::vector<PilotFrame> frames;
    double theta = 0.0;
    cplx c_theta{0.0, 0.0}; // sqrt(p) * (1 - e^{j theta})
    double phi = 0.0;       // phase of the rank-maximizing design (phase 5 only)
    int q2 = 0;             // rank backing the design (phases 2, 4)
    int f = 0;              // maximum aggregated-channel rank (phase 5)
    int part_len = 0;       // tau_{d,1}; equals tau_5 in phase 5
    int parts = 1;
    int designed_len = 0;   // structured slots at the head of part 1
};

namespace detail {

inline CMat rotate_cols_left(const CMat& m, int s) {
    const int n = static_cast<int>(m.cols());
    CMat out(m.rows(), n);
    for (int j = 0; j < n; ++j) out.col(j) = m.col((j + s) % n);
    return out;
}

inline CMat rotate_rows_up(const CMat& m, int s) {
    const int n = static_cast<int>(m.rows());
    CMat out(n, m.cols());
    for (int i = 0; i < n; ++i) out.row(i) = m.row((i + s) % n);
    return out;
}

inline cplx unit_pilot(const PlanOptions& opt, Rng& rng) {
    if (!opt.randomize_pilot_phase) return {1.0, 0.0};
    const double a = uniform_angle(rng);
    return {std::cos(a), std::sin(a)};
}

/// Pilot vector for the "reference" phases (I, III, IV): a common scalar for
/// every user in the Sum gauge, user 1 alone in the TypicalUser gauge.
inline CVec reference_pilot(int K, cplx c, ReferenceMode mode) {
    CVec x = CVec::Zero(K);
    if (mode == ReferenceMode::Sum)
        x.setConstant(c);
    else
        x(0) = c;
    return x;
}

/// Grouped pilot vector: items of group n active at rank r transmit the
/// common unit scalar, everyone else is silent.
inline CVec grouped_pilot(const GroupedDesign& g, int slot, cplx c) {
    CVec x = CVec::Zero(g.N);
    const auto [n, r] = g.locate(slot);
    for (int j = 0; j < g.group_sizes[n]; ++j)
        if (g.active(n, j, r)) x(g.index_sets[n][j]) = c;
    return x;
}

inline cplx exp_j(double a) { return {std::cos(a), std::sin(a)}; }

inline int rank_from_singvals(const RVec& s, double rtol) {
    if (s.size() == 0 || s(0) <= 0.0) return 0;
    int r = 0;
    while (r < s.size() && s(r) > rtol * s(0)) ++r;
    return r;
}

} // namespace detail

// --- Phase I: reference channel of BD-RIS 2 ---------------------------------

/// Four equal parts of length tau11 >= M2. Part 1 cycles the columns of a
/// fixed unitary P through BD-RIS 2 (fresh Haar matrices beyond slot M2 in
/// noisy operation); part 2 negates Phi1; parts 3-4 repeat with the first
/// BD-RIS 2 column perturbed by e^{j theta}.
inline PhasePlan plan_phase1(const SystemConfig& cfg, double theta, int tau11,
                             const PlanOptions& opt, Rng& rng) {
    if (tau11 <= 0) tau11 = cfg.M2;
    if (tau11 < cfg.M2)
        throw ConfigError("plan_phase1: tau11 below M2");

    PhasePlan plan;
    plan.phase = 1;
    plan.theta = theta;
    plan.c_theta = std::sqrt(cfg.p_watt()) * (cplx(1.0, 0.0) - detail::exp_j(theta));
    plan.part_len = tau11;
    plan.parts = 4;
    plan.designed_len = cfg.M2;

    const CMat D = haar_unitary(cfg.M1, rng);
    const CMat P = haar_unitary(cfg.M2, rng);

    std::vector<PilotFrame> part1(tau11);
    for (int t = 0; t < tau11; ++t) {
        part1[t].x = detail::reference_pilot(cfg.K, detail::unit_pilot(opt, rng), opt.reference);
        part1[t].phi1 = D;
        part1[t].phi2 = t < cfg.M2 ? detail::rotate_cols_left(P, t) : haar_unitary(cfg.M2, rng);
    }
    plan.frames.reserve(4 * static_cast<std::size_t>(tau11));
    for (const auto& fr : part1) plan.frames.push_back(fr);
    for (const auto& fr : part1)
        plan.frames.push_back({fr.x, -fr.phi1, fr.phi2});
    for (const auto& fr : part1) {
        PilotFrame g{fr.x, fr.phi1, fr.phi2};
        g.phi2.col(0) *= detail::exp_j(theta);
        plan.frames.push_back(std::move(g));
    }
    for (int t = 0; t < tau11; ++t) {
        PilotFrame g = plan.frames[2 * tau11 + t];
        g.phi1 = -g.phi1;
        plan.frames.push_back(std::move(g));
    }
    return plan;
}

// --- Phase II: user coefficients of BD-RIS 2 --------------------------------

/// Two equal parts of length tau21 >= ceil(K*M2/q2). Part 1 pairs the
/// grouped pilot pattern with Phi2 = V_Q2hat * P_t, P_t a row rotation of a
/// fixed unitary by (r-1)*q2; slots beyond the structured minimum carry
/// all-user unit pilots and Haar Phi2. Part 2 repeats with Phi1 negated.
inline PhasePlan plan_phase2(const SystemConfig& cfg, const CMat& Qbar2_hat, int tau21,
                             const PlanOptions& opt, Rng& rng) {
    const int q2 = numerical_rank(Qbar2_hat, cfg.rank_rtol);
    if (q2 == 0)
        throw SingularSystemError("plan_phase2: estimated reference channel has rank 0");
    const int tmin = ceil_div(static_cast<long>(cfg.K) * cfg.M2, q2);
    if (tau21 <= 0) tau21 = tmin;
    if (tau21 < tmin)
        throw ConfigError("plan_phase2: tau21 below ceil(K*M2/q2)");

    PhasePlan plan;
    plan.phase = 2;
    plan.q2 = q2;
    plan.part_len = tau21;
    plan.parts = 2;
    plan.designed_len = tmin;

    const CMat V = svd(Qbar2_hat).V;
    const GroupedDesign gd = grouped_design(cfg.K, cfg.M2, q2, tmin);
    const CMat D = haar_unitary(cfg.M1, rng);
    const CMat P = haar_unitary(cfg.M2, rng);

    std::vector<PilotFrame> part1(tau21);
    for (int t = 0; t < tau21; ++t) {
        const cplx c = detail::unit_pilot(opt, rng);
        if (t < tmin) {
            const auto [n, r] = gd.locate(t);
            part1[t].x = detail::grouped_pilot(gd, t, c);
            part1[t].phi2 = V * detail::rotate_rows_up(P, (r * q2) % cfg.M2);
        } else {
            part1[t].x = CVec::Constant(cfg.K, c);
            part1[t].phi2 = haar_unitary(cfg.M2, rng);
        }
        part1[t].phi1 = D;
    }
    plan.frames.reserve(2 * static_cast<std::size_t>(tau21));
    for (const auto& fr : part1) plan.frames.push_back(fr);
    for (const auto& fr : part1)
        plan.frames.push_back({fr.x, -fr.phi1, fr.phi2});
    return plan;
}

// --- Phase III: reference channel of BD-RIS 1 --------------------------------

/// Role-swapped mirror of Phase I: BD-RIS 1 cycles columns of a fixed
/// unitary (perturbed on column 1 in parts 3-4), BD-RIS 2 alternates +P/-P.
inline PhasePlan plan_phase3(const SystemConfig& cfg, double theta, int tau31,
                             const PlanOptions& opt, Rng& rng) {
    if (tau31 <= 0) tau31 = cfg.M1;
    if (tau31 < cfg.M1)
        throw ConfigError("plan_phase3: tau31 below M1");

    PhasePlan plan;
    plan.phase = 3;
    plan.theta = theta;
    plan.c_theta = std::sqrt(cfg.p_watt()) * (cplx(1.0, 0.0) - detail::exp_j(theta));
    plan.part_len = tau31;
    plan.parts = 4;
    plan.designed_len = cfg.M1;

    const CMat D = haar_unitary(cfg.M1, rng);
    const CMat P = haar_unitary(cfg.M2, rng);

    std::vector<PilotFrame> part1(tau31);
    for (int t = 0; t < tau31; ++t) {
        part1[t].x = detail::reference_pilot(cfg.K, detail::unit_pilot(opt, rng), opt.reference);
        part1[t].phi1 = t < cfg.M1 ? detail::rotate_cols_left(D, t) : haar_unitary(cfg.M1, rng);
        part1[t].phi2 = P;
    }
    plan.frames.reserve(4 * static_cast<std::size_t>(tau31));
    for (const auto& fr : part1) plan.frames.push_back(fr);
    for (const auto& fr : part1)
        plan.frames.push_back({fr.x, fr.phi1, -fr.phi2});
    for (const auto& fr : part1) {
        PilotFrame g{fr.x, fr.phi1, fr.phi2};
        g.phi1.col(0) *= detail::exp_j(theta);
        plan.frames.push_back(std::move(g));
    }
    for (int t = 0; t < tau31; ++t) {
        PilotFrame g = plan.frames[2 * tau31 + t];
        g.phi2 = -g.phi2;
        plan.frames.push_back(std::move(g));
    }
    return plan;
}

// --- Phase IV: inter-surface channel ------------------------------------------

/// Two equal parts of length tau41 >= ceil(M1*M2/q2). BD-RIS 2 reuses the
/// Phase-II construction with items = BD-RIS 1 elements; the first column of
/// Phi1 carries the grouped support pattern (normalized to unit norm) and is
/// completed to a unitary. Part 2 perturbs that column by e^{j theta}.
inline PhasePlan plan_phase4(const SystemConfig& cfg, const CMat& Qbar2_hat, int tau41,
                             const PlanOptions& opt, Rng& rng) {
    const int q2 = numerical_rank(Qbar2_hat, cfg.rank_rtol);
    if (q2 == 0)
        throw SingularSystemError("plan_phase4: estimated reference channel has rank 0");
    const int tmin = ceil_div(static_cast<long>(cfg.M1) * cfg.M2, q2);
    if (tau41 <= 0) tau41 = tmin;
    if (tau41 < tmin)
        throw ConfigError("plan_phase4: tau41 below ceil(M1*M2/q2)");

    PhasePlan plan;
    plan.phase = 4;
    plan.theta = cfg.theta;
    plan.c_theta = std::sqrt(cfg.p_watt()) * (cplx(1.0, 0.0) - detail::exp_j(cfg.theta));
    plan.q2 = q2;
    plan.part_len = tau41;
    plan.parts = 2;
    plan.designed_len = tmin;

    const CMat V = svd(Qbar2_hat).V;
    const GroupedDesign gd = grouped_design(cfg.M1, cfg.M2, q2, tmin);
    const CMat P = haar_unitary(cfg.M2, rng);

    std::vector<PilotFrame> part1(tau41);
    for (int t = 0; t < tau41; ++t) {
        part1[t].x =
            detail::reference_pilot(cfg.K, detail::unit_pilot(opt, rng), opt.reference);
        if (t < tmin) {
            const auto [n, r] = gd.locate(t);
            part1[t].phi2 = V * detail::rotate_rows_up(P, (r * q2) % cfg.M2);
            CVec col1 = CVec::Zero(cfg.M1);
            const int cnt = gd.active_count(n, r);
            for (int j = 0; j < gd.group_sizes[n]; ++j)
                if (gd.active(n, j, r))
                    col1(gd.index_sets[n][j]) = 1.0 / std::sqrt(static_cast<double>(cnt));
            part1[t].phi1 = orthonormal_completion(col1);
        } else {
            part1[t].phi1 = haar_unitary(cfg.M1, rng);
            part1[t].phi2 = haar_unitary(cfg.M2, rng);
        }
    }
    plan.frames.reserve(2 * static_cast<std::size_t>(tau41));
    for (const auto& fr : part1) plan.frames.push_back(fr);
    for (const auto& fr : part1) {
        PilotFrame g{fr.x, fr.phi1, fr.phi2};
        g.phi1.col(0) *= detail::exp_j(cfg.theta);
        plan.frames.push_back(std::move(g));
    }
    return plan;
}

// --- rank-maximizing BD-RIS 2 configuration -----------------------------------

struct Phi2Design {
    CMat phi2;      // M2 x M2 unitary
    int f = 0;      // max achievable rank of Qbar1 + Qbar2 * Phi2 * Bbar
    double phi = 0; // selected global phase
};

/// Computes the unitary that maximizes rank(Qbar1 + Qbar2 * Phi2 * Bbar):
/// Phi2 = e^{j phi} V_{Q~2} U_{B~}^H, where Q~2 and B~ are the projections of
/// Qbar2 and Bbar onto the left/right null spaces of Qbar1. The phase phi is
/// chosen on a 360-point grid to maximize the distance of the eigenvalues of
/// e^{j phi} F~ from -1, which keeps the leading q1 x q1 block nonsingular
/// with the best margin.
inline Phi2Design design_phi2_rank_max(const CMat& Qbar1, const CMat& Qbar2, const CMat& Bbar,
                                       double rtol = kDefaultRankRtol) {
    const int L = static_cast<int>(Qbar1.rows());
    const int M1 = static_cast<int>(Qbar1.cols());
    const int M2 = static_cast<int>(Qbar2.cols());
    if (Qbar2.rows() != L || Bbar.rows() != M2 || Bbar.cols() != M1)
        throw ConfigError("design_phi2_rank_max: inconsistent dimensions");

    const SvdResult s1 = svd(Qbar1);
    const int q1 = detail::rank_from_singvals(s1.singular_values, rtol);
    const CMat U1 = s1.U.leftCols(q1);
    const CMat U2 = s1.U.rightCols(L - q1);
    const CMat V1 = s1.V.leftCols(q1);
    const CMat V2 = s1.V.rightCols(M1 - q1);

    const CMat Qt2 = U2.adjoint() * Qbar2; // (L-q1) x M2
    const CMat Bt = Bbar * V2;             // M2 x (M1-q1)

    CMat V_Qt2 = CMat::Identity(M2, M2);
    int rank_Qt2 = 0;
    if (Qt2.rows() > 0) {
        const SvdResult s = svd(Qt2);
        V_Qt2 = s.V;
        rank_Qt2 = detail::rank_from_singvals(s.singular_values, rtol);
    }
    CMat U_Bt = CMat::Identity(M2, M2);
    int rank_Bt = 0;
    if (Bt.cols() > 0) {
        const SvdResult s = svd(Bt);
        U_Bt = s.U;
        rank_Bt = detail::rank_from_singvals(s.singular_values, rtol);
    }
    const int c = std::min(rank_Qt2, rank_Bt);

    Phi2Design out;
    if (q1 > 0) {
        CMat mask = CMat::Zero(M2, M2);
        for (int i = c; i < M2; ++i) mask(i, i) = 1.0;
        const CMat Ftilde = s1.singular_values.head(q1).cast<cplx>().cwiseInverse().asDiagonal() *
                            (U1.adjoint() * Qbar2) * V_Qt2 * mask * U_Bt.adjoint() * Bbar * V1;
        Eigen::ComplexEigenSolver<CMat> eig(Ftilde, /*computeEigenvectors=*/false);
        if (eig.info() != Eigen::Success)
            throw NumericalError("design_phi2_rank_max: eigen decomposition failed");
        const CVec& lam = eig.eigenvalues();

        double best_margin = -1.0;
        constexpr int kGrid = 360;
        for (int g = 0; g < kGrid; ++g) {
            const double phi = 2.0 * 3.14159265358979323846 * g / kGrid;
            double margin = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < lam.size(); ++i)
                margin = std::min(margin, std::abs(cplx(1.0, 0.0) + detail::exp_j(phi) * lam(i)));
            if (margin > best_margin) {
                best_margin = margin;
                out.phi = phi;
            }
        }
        if (!(best_margin > 1e-12))
            throw NumericalError("design_phi2_rank_max: no phase keeps I + e^{j phi} F~ nonsingular");
    }
    out.phi2 = detail::exp_j(out.phi) * V_Qt2 * U_Bt.adjoint();

    CMat wide(L, M1 + M2);
    wide << Qbar1, Qbar2;
    CMat tall(L + M2, M1);
    tall << Qbar1, Bbar;
    out.f = std::min(numerical_rank(wide, rtol), numerical_rank(tall, rtol));
    return out;
}

/// Bounds on the maximum aggregated-channel rank across realizations with
/// fixed component ranks.
inline std::pair<int, int> rank_f_bounds(int q1, int q2, int b, int L, int M1) {
    const int lower = std::max(q1, std::min(q2, b));
    const int upper = std::min({q1 + std::min(q2, b), L, M1});
    return {lower, upper};
}

// --- Phase V: user coefficients of BD-RIS 1 -----------------------------------

/// One part of length tau5 >= ceil(K*M1/f). BD-RIS 2 holds the rank-maximizing
/// configuration for the whole phase; BD-RIS 1 runs the grouped construction
/// on V_F with rotation step f. Slots beyond the structured minimum carry
/// all-user unit pilots and Haar Phi1.
inline PhasePlan plan_phase5(const SystemConfig& cfg, const CMat& Qbar1_hat,
                             const CMat& Qbar2_hat, const CMat& Bbar_hat, int tau5,
                             const PlanOptions& opt, Rng& rng) {
    const Phi2Design design = design_phi2_rank_max(Qbar1_hat, Qbar2_hat, Bbar_hat, cfg.rank_rtol);
    if (design.f == 0)
        throw SingularSystemError("plan_phase5: aggregated channel has rank 0");
    const int tmin = ceil_div(static_cast<long>(cfg.K) * cfg.M1, design.f);
    if (tau5 <= 0) tau5 = tmin;
    if (tau5 < tmin)
        throw ConfigError("plan_phase5: tau5 below ceil(K*M1/f)");

    PhasePlan plan;
    plan.phase = 5;
    plan.phi = design.phi;
    plan.f = design.f;
    plan.part_len = tau5;
    plan.parts = 1;
    plan.designed_len = tmin;

    const CMat F = Qbar1_hat + Qbar2_hat * design.phi2 * Bbar_hat;
    const CMat V_F = svd(F).V;
    const GroupedDesign gd = grouped_design(cfg.K, cfg.M1, design.f, tmin);
    const CMat D = haar_unitary(cfg.M1, rng);

    plan.frames.resize(tau5);
    for (int t = 0; t < tau5; ++t) {
        const cplx c = detail::unit_pilot(opt, rng);
        if (t < tmin) {
            const auto [n, r] = gd.locate(t);
            plan.frames[t].x = detail::grouped_pilot(gd, t, c);
            plan.frames[t].phi1 = V_F * detail::rotate_rows_up(D, (r * design.f) % cfg.M1);
        } else {
            plan.frames[t].x = CVec::Constant(cfg.K, c);
            plan.frames[t].phi1 = haar_unitary(cfg.M1, rng);
        }
        plan.frames[t].phi2 = design.phi2;
    }
    return plan;
}

// --- overhead calculators -------------------------------------------------------

/// Total pilot length of the five-phase scheme at the noiseless minimums.
inline long overhead(int K, int /*L*/, int M1, int M2, int q2, int f) {
    if (q2 < 1 || f < 1)
        throw ConfigError("overhead: ranks must be >= 1");
    return 4L * M2 + 2L * ceil_div(static_cast<long>(K) * M2, q2) + 4L * M1 +
           2L * ceil_div(static_cast<long>(M1) * M2, q2) +
           ceil_div(static_cast<long>(K) * M1, f);
}

struct OverheadBaselines {
    long naive = 0;        // all cascaded-channel entries treated independently
    long double_diag = 0;  // two diagonal RISs
    long single_bdris = 0; // one M1-element BD-RIS
    long single_diag = 0;  // one M1-element diagonal RIS
};

inline OverheadBaselines overhead_baselines(int K, int /*L*/, int M1, int M2, int q1, int q2) {
    if (q1 < 1 || q2 < 1)
        throw ConfigError("overhead_baselines: ranks must be >= 1");
    OverheadBaselines b;
    const long m1 = M1, m2 = M2;
    b.naive = static_cast<long>(K) * (m1 * m1 + m2 * m2 + m1 * m1 * m2 * m2);
    b.double_diag = m1 + m2 + ceil_div(static_cast<long>(K - 1) * m1, q1) +
                    ceil_div(static_cast<long>(K - 1) * m2, q2) + ceil_div(m1 * m2, q2);
    b.single_bdris = 2 * m1 + ceil_div(m1 * static_cast<long>(K - 1), q1);
    b.single_diag = m1 + ceil_div(m1 * static_cast<long>(K - 1), q1);
    return b;
}

// Ranks that hold almost surely for the i.i.d. Gaussian channel model; used
// to size pilot budgets before any estimate exists.
inline int generic_q1(const SystemConfig& c) { return std::min(c.L, c.M1); }
inline int generic_q2(const SystemConfig& c) { return std::min(c.L, c.M2); }
inline int generic_b(const SystemConfig& c) { return std::min(c.M1, c.M2); }
inline int generic_f(const SystemConfig& c) {
    return std::min(std::min(c.L, c.M1 + c.M2), std::min(c.L + c.M2, c.M1));
}

inline long minimum_overhead(const SystemConfig& c) {
    return overhead(c.K, c.L, c.M1, c.M2, generic_q2(c), generic_f(c));
}

} // namespace bdris

#endif
