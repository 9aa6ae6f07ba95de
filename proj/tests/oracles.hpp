#pragma once
// Reference implementations used only to cross-check the library. Each one is
// deliberately written the slow, obvious way.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace oracle {

inline double q(double x) { return 0.5 * boost::math::erfc(x / std::sqrt(2.0)); }

inline double q_inv(double p) {
    return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<>(), p));
}

// Per-bit Bernoulli flips on the n-bit two's-complement pattern of w.
inline std::int32_t flip_word_per_bit(std::int32_t w, int bits, double p_b, std::mt19937_64& rng) {
    std::bernoulli_distribution flip(p_b);
    const std::uint32_t mask_all = (bits == 32) ? ~0u : ((1u << bits) - 1u);
    std::uint32_t u = static_cast<std::uint32_t>(w) & mask_all;
    for (int i = 0; i < bits; ++i) {
        if (flip(rng)) u ^= (1u << i);
    }
    if (u & (1u << (bits - 1))) return static_cast<std::int32_t>(u) - (std::int32_t{1} << bits);
    return static_cast<std::int32_t>(u);
}

// Exact variance of the error for one word, averaged over all words:
// sum over bit positions of P(flip) * (2^i)^2, with the sign bit weighted 2^{n-1}.
inline double error_variance_uniform_words(int bits, double p_b) {
    double v = 0.0;
    for (int i = 0; i < bits; ++i) v += p_b * std::ldexp(1.0, 2 * i);
    return v;
}

inline double normal_approx_bits(double g, double eps, double n) {
    const double c = std::log2(1.0 + g);
    const double v = g * (g + 2.0) / ((1.0 + g) * (1.0 + g)) * std::pow(std::log2(std::exp(1.0)), 2);
    return n * c - std::sqrt(n * v) * q_inv(eps) + 0.5 * std::log2(n);
}

// Linear scan for the smallest blocklength carrying k bits.
inline std::uint64_t blocklength_scan(double g, double eps, double k) {
    std::uint64_t n = 1;
    while (normal_approx_bits(g, eps, static_cast<double>(n)) < k) ++n;
    return n;
}

struct BoundaryPoint {
    double sigma_noisy;  // radius under C + noise I (fixed by construction)
    double sigma_clean;  // radius of the same point under C
};

// Points on the boundary {v : v^T (C + noise I)^{-1} v = sigma^2}, uniform on the
// whitened sphere plus the 2D axis points where the radius gap is extremal.
inline std::vector<BoundaryPoint> boundary_points(const Eigen::VectorXd& c, double noise, double sigma,
                                                  std::size_t random_points, std::mt19937_64& rng) {
    const Eigen::Index d = c.size();
    const Eigen::ArrayXd total = c.array() + noise;
    std::normal_distribution<double> n01;
    std::vector<BoundaryPoint> out;
    auto push = [&](const Eigen::VectorXd& u) {
        const Eigen::ArrayXd v = sigma * u.array() / u.norm() * total.sqrt();
        const double noisy = std::sqrt((v.square() / total).sum());
        const double clean = std::sqrt((v.square() / c.array()).sum());
        out.push_back({noisy, clean});
    };
    for (std::size_t i = 0; i < random_points; ++i) {
        Eigen::VectorXd u(d);
        for (Eigen::Index j = 0; j < d; ++j) u[j] = n01(rng);
        push(u);
    }
    for (Eigen::Index j = 0; j < d; ++j) push(Eigen::VectorXd::Unit(d, j));
    return out;
}

}  // namespace oracle
