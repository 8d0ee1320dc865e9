#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace zofo::rng {

// Counter-based deterministic random streams.
//
// Every random quantity in the toolkit is addressed by (seed, stream,
// counter), so a perturbation drawn at iteration k of a given method can be
// reproduced without replaying the k-1 draws before it, and independent
// consumers (plant generation, each controller, Monte Carlo validation)
// never share state. The generator is the splitmix64 finalizer chain, which
// is fully specified by its constants and therefore bit-reproducible across
// platforms, unlike std::normal_distribution.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

[[nodiscard]] inline std::uint64_t avalanche(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

[[nodiscard]] inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t counter) {
    std::uint64_t s = avalanche(seed + kGolden);
    s = avalanche(s ^ (stream * 0xff51afd7ed558ccdULL));
    return avalanche(s ^ (counter * 0xc4ceb9fe1a85ec53ULL));
}

// Fixed stream tags; controllers use kControllerBase + method index.
inline constexpr std::uint64_t kStreamPlant = 1;
inline constexpr std::uint64_t kStreamObjective = 2;
inline constexpr std::uint64_t kStreamSmoothing = 3;
inline constexpr std::uint64_t kStreamValidation = 4;
inline constexpr std::uint64_t kControllerBase = 0x100;

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter = 0)
        : state_(mix(seed, stream, counter)) {}

    // Uniform on [0,1), 53-bit resolution.
    double uniform() {
        state_ += kGolden;
        return static_cast<double>(avalanche(state_) >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; pairs are cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    [[nodiscard]] Eigen::VectorXd normal_vector(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
        return v;
    }

    [[nodiscard]] Eigen::VectorXd uniform_vector(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform();
        return v;
    }

    // Row-major fill so serialized matrices read back in draw order.
    [[nodiscard]] Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform();
        return m;
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace zofo::rng
