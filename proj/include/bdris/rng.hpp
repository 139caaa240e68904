#ifndef BDRIS_RNG_HPP
#define BDRIS_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace bdris {

using Rng = std::mt19937_64;

/// splitmix64 step; used to derive decorrelated child seeds from a parent
/// seed plus stream indices so that parallel trials stay reproducible.
inline std::uint64_t split_mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
    return split_mix64(base ^ split_mix64(a << 1 | 1));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(base, a, b), c);
}

/// Standard circularly-symmetric complex Gaussian: CN(0, 1),
/// i.e. real and imaginary parts are independent N(0, 1/2).
inline std::complex<double> standard_cgauss(Rng& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    return {n(rng), n(rng)};
}

inline double uniform_angle(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979323846);
    return u(rng);
}

} // namespace bdris

#endif
