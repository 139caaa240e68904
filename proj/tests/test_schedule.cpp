#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace bdris;
using bdris::testing::random_cmat;
using bdris::testing::random_rank;
using bdris::testing::small_config;
using bdris::testing::unitarity_defect;

namespace {

void check_frames_unitary(const PhasePlan& plan) {
    for (const auto& fr : plan.frames) {
        CHECK(unitarity_defect(fr.phi1) <= 1e-10 * std::sqrt(double(fr.phi1.cols())));
        CHECK(unitarity_defect(fr.phi2) <= 1e-10 * std::sqrt(double(fr.phi2.cols())));
    }
}

void check_pilot_magnitudes(const PhasePlan& plan) {
    for (const auto& fr : plan.frames)
        for (Eigen::Index k = 0; k < fr.x.size(); ++k) {
            const double m = std::abs(fr.x(k));
            CHECK((m == 0.0 || m == 1.0));
        }
}

CanonicalFactors factors_for(const SystemConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    return canonical_factors(generate_channels(cfg, rng));
}

} // namespace

TEST_CASE("phase 1 column cycling and part structure") {
    SystemConfig cfg = small_config(2, 4, 3, 3);
    Rng rng(101);
    const PhasePlan plan = plan_phase1(cfg, cfg.theta, 3, {}, rng);
    REQUIRE(plan.frames.size() == 12);
    const int t11 = plan.part_len;
    REQUIRE(t11 == 3);

    const CMat base = plan.frames[0].phi2; // the arbitrary unitary P
    for (int t = 0; t < t11; ++t) {
        // column m2 at slot t is column (m2 + t) mod M2 of P; in particular
        // the first columns run through p_1, p_2, p_3
        for (int j = 0; j < 3; ++j)
            CHECK((plan.frames[t].phi2.col(j) - base.col((j + t) % 3)).norm() == 0.0);
    }
    for (int t = 0; t < t11; ++t) {
        const auto& p1 = plan.frames[t];
        const auto& p2 = plan.frames[t11 + t];
        const auto& p3 = plan.frames[2 * t11 + t];
        const auto& p4 = plan.frames[3 * t11 + t];
        CHECK((p2.phi1 + p1.phi1).norm() == 0.0);
        CHECK((p2.phi2 - p1.phi2).norm() == 0.0);
        CHECK((p3.phi1 - p1.phi1).norm() == 0.0);
        const cplx ejt = std::polar(1.0, cfg.theta);
        CHECK((p3.phi2.col(0) - ejt * p1.phi2.col(0)).norm() < 1e-15);
        CHECK((p3.phi2.rightCols(2) - p1.phi2.rightCols(2)).norm() == 0.0);
        CHECK((p4.phi1 + p1.phi1).norm() == 0.0);
        CHECK((p4.phi2 - p3.phi2).norm() == 0.0);
        CHECK((p1.x - p2.x).norm() == 0.0);
        CHECK((p1.x - p4.x).norm() == 0.0);
    }
    check_frames_unitary(plan);
    check_pilot_magnitudes(plan);
    CHECK_THROWS_AS(plan_phase1(cfg, cfg.theta, 2, {}, rng), ConfigError);
}

TEST_CASE("phase 1 combined signal isolates the BD-RIS 2 reference channel") {
    SystemConfig cfg = small_config(3, 4, 3, 2);
    Rng rng(103);
    const ChannelSet ch = generate_channels(cfg, rng);
    const CanonicalFactors f = canonical_factors(ch);
    const PhasePlan plan = plan_phase1(cfg, cfg.theta, 0, {}, rng);
    const double p = cfg.p_watt();
    const int t11 = plan.part_len;
    for (int t = 0; t < t11; ++t) {
        CVec parts[4];
        for (int q = 0; q < 4; ++q)
            parts[q] = received_signal(ch, plan.frames[q * t11 + t], p, 0.0, rng);
        const CVec ybar = 0.5 * (parts[0] + parts[1]) - 0.5 * (parts[2] + parts[3]);
        const CVec expect =
            plan.c_theta * plan.frames[t].x(0) * (f.Qbar2 * plan.frames[t].phi2.col(0));
        CHECK((ybar - expect).norm() <= 1e-10 * std::max(1.0, expect.norm()));
    }
}

TEST_CASE("grouped_design small enumerations") {
    {
        // M=4, q=2, N=3: singleton groups, two slots each
        const GroupedDesign g = grouped_design(3, 4, 2, 6);
        CHECK(g.base == 1);
        CHECK(g.tau0 == 2);
        CHECK(g.eta == 3);
        CHECK(g.group_sizes == std::vector<int>{1, 1, 1, 0});
        CHECK(g.time_sizes == std::vector<int>{2, 2, 2, 0});
        for (int n = 0; n < 3; ++n)
            CHECK(g.support_sets[n][0] == std::vector<int>{0, 1});
    }
    {
        // M = q: every item gets exactly one slot
        const GroupedDesign g = grouped_design(5, 3, 3, 5);
        CHECK(g.base == 1);
        CHECK(g.tau0 == 1);
        for (int n = 0; n < 5; ++n) CHECK(g.support_sets[n][0] == std::vector<int>{0});
    }
    {
        // q does not divide M: items inside a group share boundary slots
        const GroupedDesign g = grouped_design(3, 4, 3, 4);
        CHECK(g.base == 3);
        CHECK(g.tau0 == 4);
        CHECK(g.eta == 1);
        CHECK(g.support_sets[0][0] == std::vector<int>{0, 1});
        CHECK(g.support_sets[0][1] == std::vector<int>{1, 2});
        CHECK(g.support_sets[0][2] == std::vector<int>{2, 3});
    }
}

TEST_CASE("grouped_design invariants") {
    Rng rng(107);
    for (const auto& [N, M, q] : {std::tuple{3, 4, 2}, {5, 3, 3}, {7, 4, 3}, {1, 6, 4},
                                 {4, 4, 1}, {6, 5, 2}}) {
        const int tau = ceil_div(static_cast<long>(N) * M, q);
        const GroupedDesign g = grouped_design(N, M, q, tau);

        int users = 0;
        for (int s : g.group_sizes) users += s;
        CHECK(users == N);
        int slots = 0;
        for (int s : g.time_sizes) slots += s;
        CHECK(slots == tau);

        // time sets are disjoint, orderedividually and cover [0, tau)
        std::vector<int> all;
        for (const auto& t : g.time_sets) all.insert(all.end(), t.begin(), t.end());
        for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i] == all[i - 1] + 1);
        if (!all.empty()) {
            CHECK(all.front() == 0);
            CHECK(all.back() == tau - 1);
        }

        // union of supports inside each group covers {0..ceil(K_n*M/q)-1}
        for (std::size_t n = 0; n < g.support_sets.size(); ++n) {
            if (g.group_sizes[n] == 0) continue;
            std::vector<bool> hit(g.time_sizes[n], false);
            int top = 0;
            for (const auto& s : g.support_sets[n])
                for (int r : s) {
                    REQUIRE(r < g.time_sizes[n]);
                    hit[r] = true;
                    top = std::max(top, r);
                }
            CHECK(top + 1 == ceil_div(static_cast<long>(g.group_sizes[n]) * M, q));
            for (int r = 0; r <= top; ++r) CHECK(hit[r]);
        }
    }
    CHECK_THROWS_AS(grouped_design(3, 4, 2, 5), ConfigError);
    CHECK_THROWS_AS(grouped_design(3, 4, 5, 20), ConfigError);
}

TEST_CASE("phase 2 design matrix reaches full column rank at the minimum length") {
    for (const auto& [K, L, M1, M2] : {std::tuple{3, 4, 2, 3}, {2, 6, 3, 4}, {4, 4, 2, 2}}) {
        SystemConfig cfg = small_config(K, L, M1, M2);
        const CanonicalFactors f = factors_for(cfg, 211 + K);
        Rng rng(311 + K);
        const PhasePlan plan = plan_phase2(cfg, f.Qbar2, 0, {}, rng);
        CHECK(plan.q2 == std::min(L, M2));
        CHECK(plan.part_len == ceil_div(static_cast<long>(K) * M2, plan.q2));
        const CMat a2 = design_matrix_phase2(f.Qbar2, plan);
        CHECK(numerical_rank(a2) == K * M2);
        check_frames_unitary(plan);
        check_pilot_magnitudes(plan);
    }
}

TEST_CASE("phase 2 singleton case: one frame pair, user 1 active") {
    SystemConfig cfg = small_config(1, 3, 2, 2);
    const CanonicalFactors f = factors_for(cfg, 223);
    Rng rng(331);
    const PhasePlan plan = plan_phase2(cfg, f.Qbar2, 0, {}, rng);
    CHECK(plan.part_len == 1);
    REQUIRE(plan.frames.size() == 2);
    CHECK(std::abs(plan.frames[0].x(0)) == 1.0);
    CHECK((plan.frames[1].phi1 + plan.frames[0].phi1).norm() == 0.0);
    CHECK((plan.frames[1].phi2 - plan.frames[0].phi2).norm() == 0.0);
}

TEST_CASE("phase 3 structure and design rank") {
    SystemConfig cfg = small_config(2, 5, 4, 3);
    Rng rng(113);
    const PhasePlan plan = plan_phase3(cfg, cfg.theta, 0, {}, rng);
    REQUIRE(plan.part_len == 4);
    REQUIRE(plan.frames.size() == 16);
    const int t31 = 4;
    const CMat base = plan.frames[0].phi1;
    for (int t = 0; t < t31; ++t) {
        for (int j = 0; j < 4; ++j)
            CHECK((plan.frames[t].phi1.col(j) - base.col((j + t) % 4)).norm() == 0.0);
        const auto& p1 = plan.frames[t];
        const auto& p2 = plan.frames[t31 + t];
        const auto& p3 = plan.frames[2 * t31 + t];
        const auto& p4 = plan.frames[3 * t31 + t];
        CHECK((p2.phi1 - p1.phi1).norm() == 0.0);
        CHECK((p2.phi2 + p1.phi2).norm() == 0.0);
        const cplx ejt = std::polar(1.0, cfg.theta);
        CHECK((p3.phi1.col(0) - ejt * p1.phi1.col(0)).norm() < 1e-15);
        CHECK((p3.phi2 - p1.phi2).norm() == 0.0);
        CHECK((p4.phi1 - p3.phi1).norm() == 0.0);
        CHECK((p4.phi2 + p1.phi2).norm() == 0.0);
    }
    CHECK(numerical_rank(design_matrix_reference(plan)) == 4);
    check_frames_unitary(plan);

    // M1 = 1 degenerates to a single unit-modulus scalar
    SystemConfig tiny = small_config(2, 3, 1, 2);
    const PhasePlan p1 = plan_phase3(tiny, tiny.theta, 0, {}, rng);
    CHECK(p1.part_len == 1);
    CHECK(std::abs(std::abs(p1.frames[0].phi1(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("phase 1 design matrix reaches rank M2") {
    SystemConfig cfg = small_config(3, 5, 2, 4);
    Rng rng(127);
    const PhasePlan plan = plan_phase1(cfg, cfg.theta, 0, {}, rng);
    CHECK(numerical_rank(design_matrix_reference(plan)) == 4);
}

TEST_CASE("phase 4 first-column normalization and design rank") {
    for (const auto& [K, L, M1, M2] : {std::tuple{2, 5, 3, 4}, {2, 4, 4, 4}, {3, 6, 2, 3}}) {
        SystemConfig cfg = small_config(K, L, M1, M2);
        const CanonicalFactors f = factors_for(cfg, 401 + M1);
        Rng rng(433 + M1);
        const PhasePlan plan = plan_phase4(cfg, f.Qbar2, 0, {}, rng);
        CHECK(plan.part_len == ceil_div(static_cast<long>(M1) * M2, plan.q2));
        for (const auto& fr : plan.frames)
            CHECK(fr.phi1.col(0).norm() == Catch::Approx(1.0).margin(1e-12));
        const CMat a4 = design_matrix_phase4(f.Qbar2, plan);
        CHECK(numerical_rank(a4) == M1 * M2);
        check_frames_unitary(plan);

        // part 2 perturbs only the first BD-RIS 1 column
        const int t41 = plan.part_len;
        const cplx ejt = std::polar(1.0, cfg.theta);
        for (int t = 0; t < t41; ++t) {
            const auto& p1 = plan.frames[t];
            const auto& p2 = plan.frames[t41 + t];
            CHECK((p2.phi1.col(0) - ejt * p1.phi1.col(0)).norm() < 1e-15);
            CHECK((p2.phi1.rightCols(M1 - 1) - p1.phi1.rightCols(M1 - 1)).norm() == 0.0);
            CHECK((p2.phi2 - p1.phi2).norm() == 0.0);
        }
    }

    // M1 = 1 degenerates to the phase-2-like structure with a scalar column
    SystemConfig tiny = small_config(2, 4, 1, 3);
    const CanonicalFactors f = factors_for(tiny, 457);
    Rng rng(461);
    const PhasePlan plan = plan_phase4(tiny, f.Qbar2, 0, {}, rng);
    for (const auto& fr : plan.frames)
        CHECK(std::abs(std::abs(fr.phi1(0, 0)) - 1.0) < 1e-12);
    CHECK(numerical_rank(design_matrix_phase4(f.Qbar2, plan)) == 1 * 3);
}

TEST_CASE("rank-maximizing design degenerate inputs") {
    Rng rng(139);
    const int L = 5, M1 = 4, M2 = 3;
    const CMat q1m = random_rank(L, M1, 2, rng);
    const CMat q2m = random_cmat(L, M2, rng);
    const CMat bm = random_cmat(M2, M1, rng);

    {
        const Phi2Design d = design_phi2_rank_max(q1m, q2m, CMat::Zero(M2, M1));
        CHECK(d.f == 2);
        CHECK(unitarity_defect(d.phi2) < 1e-10 * std::sqrt(double(M2)));
        const CMat f = q1m + q2m * d.phi2 * CMat::Zero(M2, M1);
        CHECK(numerical_rank(f) == 2);
    }
    {
        const Phi2Design d = design_phi2_rank_max(q1m, CMat::Zero(L, M2), bm);
        CHECK(d.f == 2);
        const CMat f = q1m + CMat::Zero(L, M2) * d.phi2 * bm;
        CHECK(numerical_rank(f) == 2);
    }
}

TEST_CASE("rank-maximizing design beats 500 random configurations") {
    Rng rng(149);
    const int L = 6, M1 = 5, M2 = 4;
    const CMat q1m = random_rank(L, M1, 2, rng);
    const CMat q2m = random_cmat(L, M2, rng);
    const CMat bm = random_cmat(M2, M1, rng);

    const Phi2Design d = design_phi2_rank_max(q1m, q2m, bm);
    CMat wide(L, M1 + M2);
    wide << q1m, q2m;
    CMat tall(L + M2, M1);
    tall << q1m, bm;
    const int formula = std::min(numerical_rank(wide), numerical_rank(tall));
    CHECK(d.f == formula);
    CHECK(numerical_rank(CMat(q1m + q2m * d.phi2 * bm)) == formula);

    int best_random = 0;
    for (int it = 0; it < 500; ++it) {
        const CMat phi2 = haar_unitary(M2, rng);
        best_random = std::max(best_random, numerical_rank(CMat(q1m + q2m * phi2 * bm)));
    }
    CHECK(d.f >= best_random);
}

TEST_CASE("rank-maximizing design dodges the rank-killing phase") {
    // Constructed so that the design family e^{j phi} V U^H contains a
    // unitary that collapses the rank: with
    //   Qbar1 = e1 e1^T,  Qbar2 B = diag(1, 1, 0),
    // the choice Phi2 = -I gives Qbar1 - Qbar2 B = diag(0, -1, 0), rank 1,
    // while the maximum over unitaries is 2. The phase grid must stay away
    // from the bad point.
    const int L = 3, M1 = 3, M2 = 2;
    CMat q1m = CMat::Zero(L, M1);
    q1m(0, 0) = 1.0;
    CMat q2m = CMat::Zero(L, M2);
    q2m(0, 1) = 1.0;
    q2m(1, 0) = 1.0;
    CMat bm = CMat::Zero(M2, M1);
    bm(0, 1) = 1.0;
    bm(1, 0) = 1.0;

    REQUIRE(numerical_rank(CMat(q1m - q2m * bm)) == 1); // the trap exists

    const Phi2Design d = design_phi2_rank_max(q1m, q2m, bm);
    CHECK(d.f == 2);
    const CMat f = q1m + q2m * d.phi2 * bm;
    CHECK(numerical_rank(f) == 2);
    // margin-maximizing phase selection keeps the second singular value
    // far from the threshold
    CHECK(svd(f).singular_values(1) > 0.1);
}

TEST_CASE("rank_f_bounds") {
    CHECK(rank_f_bounds(4, 4, 4, 8, 4) == std::pair{4, 4});
    CHECK(rank_f_bounds(2, 3, 1, 8, 8) == std::pair{2, 3});
    CHECK(rank_f_bounds(3, 0, 2, 8, 8) == std::pair{3, 3}); // min{q2,b} = 0
}

TEST_CASE("Guttman rank additivity on random instances") {
    SystemConfig cfg = small_config(3, 5, 4, 3);
    for (int it = 0; it < 20; ++it) {
        Rng rng(derive_seed(157, it));
        const ChannelSet ch = generate_channels(cfg, rng);
        const CanonicalFactors f = canonical_factors(ch);
        const CMat phi2 = haar_unitary(cfg.M2, rng);
        CMat s(cfg.L + cfg.M2, cfg.M1 + cfg.M2);
        s << f.Qbar1, f.Qbar2, f.Bbar, -phi2.adjoint();
        const CMat fm = f.Qbar1 + f.Qbar2 * phi2 * f.Bbar;
        CHECK(numerical_rank(s) - cfg.M2 == numerical_rank(fm));
    }
}

TEST_CASE("phase 5 design: shared scattering matrix and full rank") {
    for (const auto& [K, L, M1, M2] : {std::tuple{3, 4, 2, 3}, {2, 6, 3, 4}, {4, 8, 4, 4}}) {
        SystemConfig cfg = small_config(K, L, M1, M2);
        const CanonicalFactors f = factors_for(cfg, 501 + K);
        Rng rng(601 + K);
        const PhasePlan plan = plan_phase5(cfg, f.Qbar1, f.Qbar2, f.Bbar, 0, {}, rng);
        CHECK(plan.part_len == ceil_div(static_cast<long>(K) * M1, plan.f));
        for (const auto& fr : plan.frames)
            CHECK((fr.phi2 - plan.frames[0].phi2).norm() == 0.0);
        const CMat fhat = f.Qbar1 + f.Qbar2 * plan.frames[0].phi2 * f.Bbar;
        CHECK(numerical_rank(design_matrix_phase5(fhat, plan)) == K * M1);
        check_frames_unitary(plan);
        check_pilot_magnitudes(plan);
    }

    // K = 1 with full aggregated rank: a single slot suffices
    SystemConfig tiny = small_config(1, 6, 3, 3);
    const CanonicalFactors f = factors_for(tiny, 541);
    Rng rng(547);
    const PhasePlan plan = plan_phase5(tiny, f.Qbar1, f.Qbar2, f.Bbar, 0, {}, rng);
    CHECK(plan.f == 3);
    CHECK(plan.part_len == 1);
}

TEST_CASE("noisy-mode padding keeps every matrix unitary and pilots unit power") {
    SystemConfig cfg = small_config(3, 4, 3, 3);
    const CanonicalFactors f = factors_for(cfg, 571);
    Rng rng(577);
    PlanOptions opt;
    for (const PhasePlan& plan :
         {plan_phase1(cfg, cfg.theta, cfg.M2 + 3, opt, rng),
          plan_phase2(cfg, f.Qbar2, 7, opt, rng), plan_phase3(cfg, cfg.theta, cfg.M1 + 2, opt, rng),
          plan_phase4(cfg, f.Qbar2, 6, opt, rng),
          plan_phase5(cfg, f.Qbar1, f.Qbar2, f.Bbar, 6, opt, rng)}) {
        check_frames_unitary(plan);
        check_pilot_magnitudes(plan);
        CHECK(plan.part_len > plan.designed_len);
    }
}

TEST_CASE("randomized pilot phases stay unit power") {
    SystemConfig cfg = small_config(3, 4, 3, 3);
    Rng rng(587);
    PlanOptions opt;
    opt.randomize_pilot_phase = true;
    const PhasePlan plan = plan_phase1(cfg, cfg.theta, 0, opt, rng);
    for (const auto& fr : plan.frames)
        for (Eigen::Index k = 0; k < fr.x.size(); ++k)
            CHECK(std::abs(std::abs(fr.x(k)) - 1.0) < 1e-15);
}

TEST_CASE("typical-user plans silence users 2..K in reference phases") {
    SystemConfig cfg = small_config(4, 4, 3, 3);
    const CanonicalFactors f = factors_for(cfg, 593);
    Rng rng(599);
    PlanOptions opt;
    opt.reference = ReferenceMode::TypicalUser;
    for (const PhasePlan& plan : {plan_phase1(cfg, cfg.theta, 0, opt, rng),
                                  plan_phase3(cfg, cfg.theta, 0, opt, rng),
                                  plan_phase4(cfg, f.Qbar2, 0, opt, rng)}) {
        for (const auto& fr : plan.frames) {
            CHECK(std::abs(fr.x(0)) == 1.0);
            CHECK(fr.x.tail(3).norm() == 0.0);
        }
    }
    // grouped phases keep all users active
    const PhasePlan p2 = plan_phase2(cfg, f.Qbar2, 0, opt, rng);
    bool any_other_user = false;
    for (const auto& fr : p2.frames) any_other_user = any_other_user || fr.x.tail(3).norm() > 0;
    CHECK(any_other_user);
}

TEST_CASE("overhead closed forms") {
    CHECK(overhead(8, 8, 4, 4, 4, 4) == 64);
    CHECK(overhead(20, 4, 4, 4, 4, 4) == 100);
    CHECK(overhead(1, 1, 1, 1, 1, 1) == 13); // 4 + 2 + 4 + 2 + 1
    const OverheadBaselines b1 = overhead_baselines(8, 8, 4, 4, 4, 4);
    CHECK(b1.naive == 2304);
    const OverheadBaselines b2 = overhead_baselines(20, 4, 4, 4, 4, 4);
    CHECK(b2.naive == 5760);
    // remaining closed forms, plugged in by hand
    CHECK(b1.double_diag == 4 + 4 + 7 + 7 + 4);
    CHECK(b1.single_bdris == 8 + 7);
    CHECK(b1.single_diag == 4 + 7);
    CHECK_THROWS_AS(overhead(8, 8, 4, 4, 0, 4), ConfigError);
}
