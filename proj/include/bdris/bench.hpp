#ifndef BDRIS_BENCH_HPP
#define BDRIS_BENCH_HPP

#include <cstdio>
#include <string>
#include <vector>

#include "bdris/estimator.hpp"

namespace bdris {

enum class Scheme { ProposedSum, ProposedTypicalUser, Benchmark };
enum class SweepAxis { PDbm, PilotLength, Users, M2Elements };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ProposedSum: return "proposed_sum";
        case Scheme::ProposedTypicalUser: return "proposed_typical_user";
        case Scheme::Benchmark: return "benchmark";
    }
    return "?";
}

inline const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::PDbm: return "p_dbm";
        case SweepAxis::PilotLength: return "T";
        case SweepAxis::Users: return "K";
        case SweepAxis::M2Elements: return "M2";
    }
    return "?";
}

inline Scheme scheme_from_name(const std::string& s) {
    if (s == "proposed_sum") return Scheme::ProposedSum;
    if (s == "proposed_typical_user") return Scheme::ProposedTypicalUser;
    if (s == "benchmark") return Scheme::Benchmark;
    throw ConfigError("unknown scheme: " + s);
}

inline SweepAxis axis_from_name(const std::string& s) {
    if (s == "p_dbm") return SweepAxis::PDbm;
    if (s == "T") return SweepAxis::PilotLength;
    if (s == "K") return SweepAxis::Users;
    if (s == "M2") return SweepAxis::M2Elements;
    throw ConfigError("unknown sweep axis: " + s);
}

/// Splits a total pilot budget T across the five phases. Starts from the
/// noiseless minimums (sized with the almost-sure generic ranks) and hands
/// out the surplus round-robin; a phase-1/3 increment costs 4 slots and a
/// phase-2/4 increment 2, because parts must stay equal length.
inline PhaseLengths allocate_lengths(const SystemConfig& cfg, int T) {
    const int q2 = generic_q2(cfg);
    const int f = generic_f(cfg);
    PhaseLengths l;
    l.tau11 = cfg.M2;
    l.tau21 = ceil_div(static_cast<long>(cfg.K) * cfg.M2, q2);
    l.tau31 = cfg.M1;
    l.tau41 = ceil_div(static_cast<long>(cfg.M1) * cfg.M2, q2);
    l.tau5 = ceil_div(static_cast<long>(cfg.K) * cfg.M1, f);
    if (T <= 0) return l;

    const long tmin = 4L * l.tau11 + 2L * l.tau21 + 4L * l.tau31 + 2L * l.tau41 + l.tau5;
    if (T < tmin)
        throw ConfigError("pilot length " + std::to_string(T) + " below the minimum " +
                          std::to_string(tmin));
    long extra = T - tmin;
    int* lens[5] = {&l.tau11, &l.tau21, &l.tau31, &l.tau41, &l.tau5};
    const int costs[5] = {4, 2, 4, 2, 1};
    while (extra > 0) {
        for (int i = 0; i < 5 && extra > 0; ++i) {
            if (costs[i] <= extra) {
                ++*lens[i];
                extra -= costs[i];
            }
        }
    }
    return l;
}

/// One experiment: sweep an axis, average NMSE per (value, scheme) cell.
struct SweepSpec {
    SystemConfig base;
    SweepAxis axis = SweepAxis::PDbm;
    std::vector<double> values;
    int trials = 200;
    std::vector<Scheme> schemes{Scheme::ProposedSum, Scheme::ProposedTypicalUser,
                                Scheme::Benchmark};
    std::string out_path = "sweep.csv";
    int pilot_length = 0; // total T; 0 means the per-config minimum
    bool noiseless = false;
    long benchmark_unknown_cap = 2'000'000;

    void validate() const {
        base.validate();
        if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
        if (values.empty()) throw ConfigError("sweep: values must be nonempty");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] < values[i - 1])
                throw ConfigError("sweep: values must be sorted ascending");
        if (schemes.empty()) throw ConfigError("sweep: schemes must be nonempty");
    }
};

struct SweepRow {
    SweepAxis axis;
    double value = 0.0;
    Scheme scheme;
    double mean_nmse = 0.0;
    int trials = 0; // successful trials
    std::uint64_t seed = 0;
};

inline SweepSpec sweep_from_json(const nlohmann::json& j) {
    SweepSpec s;
    if (j.contains("config")) s.base = config_from_json(j.at("config"));
    if (j.contains("axis")) s.axis = axis_from_name(j.at("axis").get<std::string>());
    if (j.contains("values")) s.values = j.at("values").get<std::vector<double>>();
    detail::get_if_present(j, "trials", s.trials);
    if (j.contains("schemes")) {
        s.schemes.clear();
        for (const auto& name : j.at("schemes"))
            s.schemes.push_back(scheme_from_name(name.get<std::string>()));
    }
    detail::get_if_present(j, "out", s.out_path);
    detail::get_if_present(j, "pilot_length", s.pilot_length);
    detail::get_if_present(j, "noiseless", s.noiseless);
    detail::get_if_present(j, "benchmark_unknown_cap", s.benchmark_unknown_cap);
    s.validate();
    return s;
}

inline SweepSpec load_sweep(const std::string& path) {
    return sweep_from_json(load_json_file(path));
}

namespace detail {

inline SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double v) {
    SystemConfig cfg = base;
    switch (axis) {
        case SweepAxis::PDbm: cfg.p_dbm = v; break;
        case SweepAxis::PilotLength: break; // handled as the budget, not a config field
        case SweepAxis::Users: cfg.K = static_cast<int>(v); break;
        case SweepAxis::M2Elements: cfg.M2 = static_cast<int>(v); break;
    }
    cfg.validate();
    return cfg;
}

} // namespace detail

/// Single trial of one scheme at one axis point. The rng must be a
/// trial-private stream so runs are order-independent.
inline double run_trial(const SystemConfig& cfg, Scheme scheme, int pilot_length,
                        bool noiseless, long unknown_cap, Rng& rng) {
    const ChannelSet ch = generate_channels(cfg, rng);
    if (scheme == Scheme::Benchmark) {
        const int T = pilot_length > 0 ? pilot_length
                                       : static_cast<int>(minimum_overhead(cfg));
        return benchmark_full_ls(cfg, ch, T, noiseless, rng, unknown_cap).nmse;
    }
    PipelineOptions opt;
    opt.noiseless = noiseless;
    opt.lengths = allocate_lengths(cfg, pilot_length);
    opt.reference = scheme == Scheme::ProposedTypicalUser ? ReferenceMode::TypicalUser
                                                          : ReferenceMode::Sum;
    return run_pipeline(cfg, ch, opt, rng).nmse;
}

/// Runs the whole sweep. Deterministic given the spec: each trial draws from
/// a stream derived from (seed, axis index, scheme, trial index); failed
/// trials are skipped and the per-row trial count records the survivors.
inline std::vector<SweepRow> monte_carlo(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
        const double v = spec.values[vi];
        const SystemConfig cfg = detail::apply_axis(spec.base, spec.axis, v);
        const int T = spec.axis == SweepAxis::PilotLength ? static_cast<int>(v)
                                                          : spec.pilot_length;
        for (const Scheme scheme : spec.schemes) {
            const std::uint64_t row_seed =
                derive_seed(spec.base.seed, vi, static_cast<std::uint64_t>(scheme) + 101);
            double sum = 0.0;
            int ok = 0;
            for (int trial = 0; trial < spec.trials; ++trial) {
                Rng rng(derive_seed(row_seed, static_cast<std::uint64_t>(trial)));
                try {
                    sum += run_trial(cfg, scheme, T, spec.noiseless,
                                     spec.benchmark_unknown_cap, rng);
                    ++ok;
                } catch (const std::exception& e) {
                    std::fprintf(stderr, "trial failed (%s=%g, %s, trial %d): %s\n",
                                 axis_name(spec.axis), v, scheme_name(scheme), trial,
                                 e.what());
                }
            }
            rows.push_back({spec.axis, v, scheme,
                            ok > 0 ? sum / ok : std::numeric_limits<double>::quiet_NaN(), ok,
                            row_seed});
        }
    }
    return rows;
}

// --- CSV ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "axis,value,scheme,mean_nmse,trials,seed\n";
    for (const auto& r : rows) {
        out += axis_name(r.axis);
        out += ',';
        out += format_double(r.value);
        out += ',';
        out += scheme_name(r.scheme);
        out += ',';
        out += format_double(r.mean_nmse);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file: " + path);
    out << content;
}

} // namespace bdris

#endif
