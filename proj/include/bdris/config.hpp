#ifndef BDRIS_CONFIG_HPP
#define BDRIS_CONFIG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

#include <json.hpp>

#include "bdris/errors.hpp"

namespace bdris {

using Pos2 = std::array<double, 2>;

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double distance(const Pos2& a, const Pos2& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

/// Scenario parameters. Defaults reproduce the standard simulation setup:
/// BS at the origin, BD-RIS 1 near the user cluster, BD-RIS 2 near the BS,
/// users uniform in a disk of radius 3 m around (20, 0).
struct SystemConfig {
    int K = 8;  // users
    int L = 8;  // BS antennas
    int M1 = 4; // BD-RIS 1 elements
    int M2 = 4; // BD-RIS 2 elements

    double p_dbm = 30.0;             // per-user transmit power
    double noise_psd_dbm_hz = -169.0;
    double bandwidth_hz = 1.0e6;
    double beta0_db = -20.0;         // path loss at reference distance

    Pos2 bs_pos{0.0, 0.0};
    Pos2 ris1_pos{15.0, 5.0};
    Pos2 ris2_pos{5.0, 5.0};
    Pos2 user_center{20.0, 0.0};
    double user_radius = 3.0;

    double alpha_r1_bs = 4.0;
    double alpha_r2_bs = 2.0;
    double alpha_r1_r2 = 2.0;
    double alpha_u_r1 = 2.0;
    double alpha_u_r2 = 4.0;

    std::uint64_t seed = 1;

    double rank_rtol = 1e-8;         // numerical-rank threshold, also used in noisy mode
    double theta = 3.14159265358979323846; // scattering perturbation phase, in (0, 2*pi)

    double p_watt() const { return dbm_to_watt(p_dbm); }

    /// Noise power sigma^2 in W, from the PSD and bandwidth
    /// (-169 dBm/Hz over 1 MHz gives -109 dBm).
    double sigma2_watt() const {
        return dbm_to_watt(noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz));
    }

    double beta0() const { return db_to_linear(beta0_db); }

    double beta_r1_bs() const {
        return beta0() * std::pow(distance(ris1_pos, bs_pos), -alpha_r1_bs);
    }
    double beta_r2_bs() const {
        return beta0() * std::pow(distance(ris2_pos, bs_pos), -alpha_r2_bs);
    }
    double beta_r1_r2() const {
        return beta0() * std::pow(distance(ris1_pos, ris2_pos), -alpha_r1_r2);
    }
    double beta_user_ris(const Pos2& user, int surface) const {
        const Pos2& ris = surface == 1 ? ris1_pos : ris2_pos;
        const double alpha = surface == 1 ? alpha_u_r1 : alpha_u_r2;
        return beta0() * std::pow(distance(user, ris), -alpha);
    }

    void validate() const {
        if (K < 1 || L < 1 || M1 < 1 || M2 < 1)
            throw ConfigError("config: K, L, M1, M2 must all be >= 1");
        if (bandwidth_hz <= 0.0)
            throw ConfigError("config: bandwidth_hz must be positive");
        if (user_radius < 0.0)
            throw ConfigError("config: user_radius must be nonnegative");
        if (rank_rtol <= 0.0 || rank_rtol >= 1.0)
            throw ConfigError("config: rank_rtol must lie in (0,1)");
        if (theta <= 0.0 || theta >= 2.0 * 3.14159265358979323846)
            throw ConfigError("config: theta must lie in (0, 2*pi)");
        if (!(sigma2_watt() > 0.0))
            throw ConfigError("config: derived noise power must be positive");
    }
};

namespace detail {
template <typename T>
void get_if_present(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}
} // namespace detail

inline SystemConfig config_from_json(const nlohmann::json& j) {
    SystemConfig c;
    detail::get_if_present(j, "K", c.K);
    detail::get_if_present(j, "L", c.L);
    detail::get_if_present(j, "M1", c.M1);
    detail::get_if_present(j, "M2", c.M2);
    detail::get_if_present(j, "p_dbm", c.p_dbm);
    detail::get_if_present(j, "noise_psd_dbm_hz", c.noise_psd_dbm_hz);
    detail::get_if_present(j, "bandwidth_hz", c.bandwidth_hz);
    detail::get_if_present(j, "beta0_db", c.beta0_db);
    detail::get_if_present(j, "bs_pos", c.bs_pos);
    detail::get_if_present(j, "ris1_pos", c.ris1_pos);
    detail::get_if_present(j, "ris2_pos", c.ris2_pos);
    detail::get_if_present(j, "user_center", c.user_center);
    detail::get_if_present(j, "user_radius", c.user_radius);
    detail::get_if_present(j, "alpha_r1_bs", c.alpha_r1_bs);
    detail::get_if_present(j, "alpha_r2_bs", c.alpha_r2_bs);
    detail::get_if_present(j, "alpha_r1_r2", c.alpha_r1_r2);
    detail::get_if_present(j, "alpha_u_r1", c.alpha_u_r1);
    detail::get_if_present(j, "alpha_u_r2", c.alpha_u_r2);
    detail::get_if_present(j, "seed", c.seed);
    detail::get_if_present(j, "rank_rtol", c.rank_rtol);
    detail::get_if_present(j, "theta", c.theta);
    c.validate();
    return c;
}

inline nlohmann::json config_to_json(const SystemConfig& c) {
    return nlohmann::json{
        {"K", c.K},
        {"L", c.L},
        {"M1", c.M1},
        {"M2", c.M2},
        {"p_dbm", c.p_dbm},
        {"noise_psd_dbm_hz", c.noise_psd_dbm_hz},
        {"bandwidth_hz", c.bandwidth_hz},
        {"beta0_db", c.beta0_db},
        {"bs_pos", c.bs_pos},
        {"ris1_pos", c.ris1_pos},
        {"ris2_pos", c.ris2_pos},
        {"user_center", c.user_center},
        {"user_radius", c.user_radius},
        {"alpha_r1_bs", c.alpha_r1_bs},
        {"alpha_r2_bs", c.alpha_r2_bs},
        {"alpha_r1_r2", c.alpha_r1_r2},
        {"alpha_u_r1", c.alpha_u_r1},
        {"alpha_u_r2", c.alpha_u_r2},
        {"seed", c.seed},
        {"rank_rtol", c.rank_rtol},
        {"theta", c.theta}};
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline SystemConfig load_config(const std::string& path) {
    nlohmann::json j = load_json_file(path);
    // Sweep files nest the scenario under "config".
    if (j.contains("config")) return config_from_json(j.at("config"));
    return config_from_json(j);
}

} // namespace bdris

#endif
