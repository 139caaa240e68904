// Command-line front end: closed-form overhead tables, single estimation
// runs, Monte-Carlo NMSE sweeps and a quick selftest.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "bdris/bdris.hpp"

namespace {

bdris::SystemConfig resolve_config(const std::string& path) {
    if (path.empty()) return bdris::SystemConfig{};
    return bdris::load_config(path);
}

int cmd_overhead(const std::string& config_path, bdris::SystemConfig cli_cfg, bool cfg_from_flags,
                 int q1, int q2, int b, int f) {
    bdris::SystemConfig cfg = cfg_from_flags ? cli_cfg : resolve_config(config_path);
    cfg.validate();
    if (q1 <= 0) q1 = bdris::generic_q1(cfg);
    if (q2 <= 0) q2 = bdris::generic_q2(cfg);
    if (b <= 0) b = bdris::generic_b(cfg);
    // Channels in general position reach the best-case aggregated rank.
    if (f <= 0) f = bdris::rank_f_bounds(q1, q2, b, cfg.L, cfg.M1).second;

    const long proposed = bdris::overhead(cfg.K, cfg.L, cfg.M1, cfg.M2, q2, f);
    const auto base = bdris::overhead_baselines(cfg.K, cfg.L, cfg.M1, cfg.M2, q1, q2);
    std::printf("scheme,overhead\n");
    std::printf("proposed,%ld\n", proposed);
    std::printf("naive,%ld\n", base.naive);
    std::printf("double_diag,%ld\n", base.double_diag);
    std::printf("single_bdris,%ld\n", base.single_bdris);
    std::printf("single_diag,%ld\n", base.single_diag);
    return 0;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, bool seed_set,
                 bool noiseless, int pilot_length, const std::string& reference) {
    bdris::SystemConfig cfg = resolve_config(config_path);
    if (seed_set) cfg.seed = seed;
    cfg.validate();

    bdris::PipelineOptions opt;
    opt.noiseless = noiseless;
    opt.lengths = bdris::allocate_lengths(cfg, pilot_length);
    if (reference == "typical_user")
        opt.reference = bdris::ReferenceMode::TypicalUser;
    else if (reference != "sum")
        throw bdris::ConfigError("--reference must be 'sum' or 'typical_user'");

    bdris::Rng rng(cfg.seed);
    const bdris::EstimationResult res = bdris::run_pipeline(cfg, opt, rng);

    const long total = opt.lengths.total();
    std::printf("K=%d L=%d M1=%d M2=%d  p=%.6g dBm  %s  reference=%s  seed=%llu\n", cfg.K,
                cfg.L, cfg.M1, cfg.M2, cfg.p_dbm, noiseless ? "noiseless" : "noisy",
                reference.c_str(), static_cast<unsigned long long>(cfg.seed));
    std::printf("pilot length T=%ld  (tau11=%d tau21=%d tau31=%d tau41=%d tau5=%d)\n", total,
                opt.lengths.tau11, opt.lengths.tau21, opt.lengths.tau31, opt.lengths.tau41,
                opt.lengths.tau5);
    std::printf("detected ranks: q2=%d f=%d\n", res.q2_detected, res.f_detected);
    for (const auto& r : res.per_phase_residuals)
        std::printf("phase %d relative residual: %.3e\n", r.phase, r.relative_residual);
    std::printf("NMSE: %.17g\n", res.nmse);
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              int trials_override, std::uint64_t seed, bool seed_set) {
    if (config_path.empty())
        throw bdris::ConfigError("sweep: --config <file> is required");
    bdris::SweepSpec spec = bdris::load_sweep(config_path);
    if (trials_override > 0) spec.trials = trials_override;
    if (seed_set) spec.base.seed = seed;
    if (!out_override.empty()) spec.out_path = out_override;

    const auto rows = bdris::monte_carlo(spec);
    bdris::write_file(spec.out_path, bdris::sweep_to_csv(rows));
    std::printf("wrote %zu rows to %s\n", rows.size(), spec.out_path.c_str());
    return 0;
}

int run_app(int argc, char** argv) {
    CLI::App app{"Low-overhead channel estimation for double-BD-RIS multi-user MIMO uplinks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;

    auto* ov = app.add_subcommand("overhead", "Print the closed-form pilot-overhead table as CSV");
    ov->add_option("--config", config_path, "Scenario config JSON");
    int ov_K = 0, ov_L = 0, ov_M1 = 0, ov_M2 = 0, ov_q1 = 0, ov_q2 = 0, ov_b = 0, ov_f = 0;
    ov->add_option("-K,--users", ov_K, "User count");
    ov->add_option("-L,--antennas", ov_L, "BS antenna count");
    ov->add_option("--M1", ov_M1, "BD-RIS 1 element count");
    ov->add_option("--M2", ov_M2, "BD-RIS 2 element count");
    ov->add_option("--q1", ov_q1, "rank of the BD-RIS 1 - BS reference channel");
    ov->add_option("--q2", ov_q2, "rank of the BD-RIS 2 - BS reference channel");
    ov->add_option("-b,--rank-b", ov_b, "rank of the inter-surface channel");
    ov->add_option("-f,--rank-f", ov_f, "rank of the aggregated phase-5 channel");

    auto* sim = app.add_subcommand("simulate", "Run one end-to-end estimation and print NMSE");
    sim->add_option("--config", config_path, "Scenario config JSON");
    sim->add_flag("--noiseless", "Disable BS noise");
    int sim_T = 0;
    std::string sim_ref = "sum";
    sim->add_option("-T,--pilot-length", sim_T, "Total pilot budget (0 = minimum)");
    sim->add_option("--reference", sim_ref, "Reference gauge: sum | typical_user");
    sim->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* sw = app.add_subcommand("sweep", "Run a Monte-Carlo sweep spec and write CSV");
    sw->add_option("--config", config_path, "Sweep spec JSON")->required();
    sw->add_option("--out", out_path, "Override the output CSV path");
    sw->add_option("--trials", trials, "Override the trial count");
    sw->add_option("--seed", seed, "Override the base seed")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* st = app.add_subcommand("selftest", "Run the built-in invariant checks");
    (void)st;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ov->parsed()) {
            bdris::SystemConfig cfg;
            const bool from_flags = ov_K > 0 || ov_L > 0 || ov_M1 > 0 || ov_M2 > 0;
            if (from_flags) {
                if (ov_K > 0) cfg.K = ov_K;
                if (ov_L > 0) cfg.L = ov_L;
                if (ov_M1 > 0) cfg.M1 = ov_M1;
                if (ov_M2 > 0) cfg.M2 = ov_M2;
            }
            return cmd_overhead(config_path, cfg, from_flags, ov_q1, ov_q2, ov_b, ov_f);
        }
        if (sim->parsed())
            return cmd_simulate(config_path, seed, seed_set, sim->count("--noiseless") > 0,
                                sim_T, sim_ref);
        if (sw->parsed())
            return cmd_sweep(config_path, out_path, trials, seed, seed_set);
        if (st->parsed())
            return bdris::selftest() == 0 ? 0 : 2;
    } catch (const bdris::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const bdris::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
