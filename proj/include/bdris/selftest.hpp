#ifndef BDRIS_SELFTEST_HPP
#define BDRIS_SELFTEST_HPP

#include <cstdio>

#include "bdris/bench.hpp"

namespace bdris {

/// Quick invariant sweep for installed binaries; the full Catch2 suites are
/// the real gate. Returns the number of failed checks.
inline int selftest() {
    int failures = 0;
    auto check = [&failures](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    Rng rng(20240601);

    // SVD reconstruction and orthonormality.
    {
        CMat a(6, 4);
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 6; ++i) a(i, j) = standard_cgauss(rng);
        const SvdResult s = svd(a);
        const double rec = (s.U * s.sigma() * s.V.adjoint() - a).norm();
        const double ou = (s.U.adjoint() * s.U - CMat::Identity(6, 6)).norm();
        const double ov = (s.V.adjoint() * s.V - CMat::Identity(4, 4)).norm();
        check("svd reconstruction + orthonormality",
              rec <= 1e-10 * std::max(1.0, a.norm()) && ou <= 1e-10 * std::sqrt(6.0) &&
                  ov <= 1e-10 * 2.0);
    }

    // vec(AXB) = (B^T kron A) vec(X).
    {
        bool ok = true;
        for (int it = 0; it < 5; ++it) {
            CMat A(2, 3), X(3, 2), B(2, 2);
            for (auto* m : {&A, &X, &B})
                for (Eigen::Index i = 0; i < m->size(); ++i)
                    *(m->data() + i) = standard_cgauss(rng);
            const CVec lhs = vec(CMat(A * X * B));
            const CVec rhs = kron(B.transpose(), A) * vec(X);
            ok = ok && (lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm());
        }
        check("kron/vec identity", ok);
    }

    // Haar unitarity across sizes.
    {
        bool ok = true;
        for (int n : {1, 2, 4, 8, 16, 32}) {
            const CMat u = haar_unitary(n, rng);
            ok = ok && (u.adjoint() * u - CMat::Identity(n, n)).norm() <= 1e-10 * std::sqrt(n);
        }
        check("haar_unitary unitarity", ok);
    }

    // Planted least-squares recovery.
    {
        CMat a(8, 3);
        for (Eigen::Index i = 0; i < a.size(); ++i) *(a.data() + i) = standard_cgauss(rng);
        CVec x(3);
        for (int i = 0; i < 3; ++i) x(i) = standard_cgauss(rng);
        const CVec xs = ls_solve(a, CMat(a * x));
        check("ls_solve planted recovery", (xs - x).norm() <= 1e-10 * x.norm());
    }

    // Rank additivity of the block system [[Q1, Q2], [B, -Phi2^H]].
    {
        bool ok = true;
        SystemConfig cfg;
        cfg.K = 3; cfg.L = 5; cfg.M1 = 4; cfg.M2 = 3;
        for (int it = 0; it < 10 && ok; ++it) {
            Rng r2(derive_seed(7, it));
            const ChannelSet ch = generate_channels(cfg, r2);
            const CanonicalFactors f = canonical_factors(ch);
            const CMat phi2 = haar_unitary(cfg.M2, r2);
            CMat s(cfg.L + cfg.M2, cfg.M1 + cfg.M2);
            s << f.Qbar1, f.Qbar2, f.Bbar, -phi2.adjoint();
            const CMat F = f.Qbar1 + f.Qbar2 * phi2 * f.Bbar;
            ok = numerical_rank(s) - cfg.M2 == numerical_rank(F);
        }
        check("Guttman rank additivity", ok);
    }

    // Closed-form overhead.
    {
        const bool ok = overhead(8, 8, 4, 4, 4, 4) == 64 &&
                        overhead_baselines(8, 8, 4, 4, 4, 4).naive == 2304 &&
                        overhead(20, 4, 4, 4, 4, 4) == 100 &&
                        overhead_baselines(20, 4, 4, 4, 4, 4).naive == 5760;
        check("overhead golden values", ok);
    }

    // Noiseless end-to-end exactness.
    {
        bool ok = true;
        SystemConfig cfg;
        cfg.K = 2; cfg.L = 4; cfg.M1 = 2; cfg.M2 = 2;
        for (int seed = 0; seed < 2 && ok; ++seed) {
            Rng r2(derive_seed(99, seed));
            PipelineOptions opt;
            opt.noiseless = true;
            ok = run_pipeline(cfg, opt, r2).nmse <= 1e-8;
        }
        check("noiseless pipeline exactness", ok);
    }

    // Rank-maximizing scattering design reaches the closed-form rank.
    {
        bool ok = true;
        SystemConfig cfg;
        cfg.K = 2; cfg.L = 6; cfg.M1 = 5; cfg.M2 = 4;
        for (int it = 0; it < 10 && ok; ++it) {
            Rng r2(derive_seed(31, it));
            const ChannelSet ch = generate_channels(cfg, r2);
            const CanonicalFactors f = canonical_factors(ch);
            const Phi2Design d = design_phi2_rank_max(f.Qbar1, f.Qbar2, f.Bbar);
            const CMat F = f.Qbar1 + f.Qbar2 * d.phi2 * f.Bbar;
            ok = numerical_rank(F) == d.f;
        }
        check("rank-maximizing design", ok);
    }

    return failures;
}

} // namespace bdris

#endif
