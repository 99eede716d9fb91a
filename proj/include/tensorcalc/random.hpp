#pragma once

#include "tensorcalc/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <cstddef>

namespace tensorcalc {

/// xoshiro256** with splitmix64 seeding. Self-contained so that seeded runs
/// produce identical streams on every platform.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform();
        while (u == 0.0) u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(6.283185307179586476925286766559 * v);
        have_spare_ = true;
        return r * std::cos(6.283185307179586476925286766559 * v);
    }

    std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline DenseTensor random_tensor(Xoshiro256& rng, const Shape& shape, double lo = -1.0, double hi = 1.0) {
    DenseTensor t(shape);
    for (double& v : t.values()) v = rng.uniform(lo, hi);
    return t;
}

inline DenseTensor random_gaussian_tensor(Xoshiro256& rng, const Shape& shape) {
    DenseTensor t(shape);
    for (double& v : t.values()) v = rng.gaussian();
    return t;
}

/// Gaussian entries kept with probability `density`, zero otherwise.
inline DenseTensor random_sparse_gaussian_tensor(Xoshiro256& rng, const Shape& shape, double density) {
    DenseTensor t(shape);
    for (double& v : t.values()) {
        const double g = rng.gaussian(); // drawn unconditionally to keep streams aligned
        v = (rng.uniform() < density) ? g : 0.0;
    }
    return t;
}

inline DenseTensor random_symmetric_matrix(Xoshiro256& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    DenseTensor x({n, n});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.uniform(lo, hi);
            x(i, j) = v;
            x(j, i) = v;
        }
    }
    return x;
}

/// Orthonormal n x r factor from a Gaussian draw, via Gram-Schmidt.
inline DenseTensor random_orthonormal(Xoshiro256& rng, std::size_t n, std::size_t r) {
    if (r > n) throw std::invalid_argument("random_orthonormal: more columns than rows");
    DenseTensor u({n, r});
    std::vector<double> col(n);
    for (std::size_t j = 0; j < r; ++j) {
        for (auto& v : col) v = rng.gaussian();
        for (std::size_t k = 0; k < j; ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += u(i, k) * col[i];
            for (std::size_t i = 0; i < n; ++i) col[i] -= dot * u(i, k);
        }
        double nrm = 0.0;
        for (double v : col) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) u(i, j) = col[i] / nrm;
    }
    return u;
}

/// Fully symmetric random tensor: entries depend only on the index multiset.
inline DenseTensor random_symmetric_tensor(Xoshiro256& rng, std::size_t order, std::size_t n) {
    DenseTensor t(Shape(order, n));
    std::vector<std::size_t> idx(order, 0), sorted(order);
    do {
        sorted.assign(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        if (sorted == idx) t.at(idx) = rng.uniform(-1.0, 1.0);
    } while (detail::next_index(idx, t.shape()));
    do {
        sorted.assign(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        t.at(idx) = t.at(sorted);
    } while (detail::next_index(idx, t.shape()));
    return t;
}

} // namespace tensorcalc
