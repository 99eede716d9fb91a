#pragma once

#include "tensorcalc/tensor.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>

// Bundled data for the published 3x4x3x4 polynomial example: the input
// tensor and the two reference blocks of f(A) = A^3 + 5 A^2 - 6 I that the
// reproduction report compares against. Typed once from the source table
// (two-decimal values) and guarded by a checksum.

namespace tensorcalc::fixtures {

namespace detail {

// Block (j,k) of A, i.e. the 3x4 slice A(:,:,j,k), listed for
// k = 1..4 (outer) and j = 1..3 (inner) in display order.
inline constexpr std::array<std::array<double, 12>, 12> kExampleA = {{
    {0.54, 0.49, 0.27, 0.64, 0.45, 0.85, 0.21, 0.42, 0.12, 0.87, 0.57, 0.21},
    {0.95, 0.14, 0.57, 0.73, 0.08, 0.17, 0.05, 0.74, 0.11, 0.62, 0.93, 0.06},
    {0.86, 0.86, 0.18, 0.03, 0.93, 0.79, 0.40, 0.94, 0.98, 0.51, 0.13, 0.30},
    {0.30, 0.65, 0.56, 0.45, 0.33, 0.03, 0.85, 0.05, 0.47, 0.84, 0.35, 0.18},
    {0.66, 0.12, 0.71, 0.41, 0.33, 0.99, 1.00, 0.47, 0.90, 0.54, 0.29, 0.76},
    {0.82, 0.36, 0.34, 0.91, 0.10, 0.06, 0.18, 0.68, 0.18, 0.52, 0.21, 0.47},
    {0.91, 0.74, 0.60, 0.21, 0.10, 0.56, 0.30, 0.90, 0.75, 0.18, 0.13, 0.07},
    {0.24, 0.01, 0.09, 0.10, 0.05, 0.90, 0.31, 1.00, 0.44, 0.20, 0.46, 0.33},
    {0.30, 0.05, 0.63, 0.78, 0.06, 0.51, 0.09, 0.91, 0.30, 0.76, 0.08, 0.54},
    {0.11, 0.30, 0.05, 0.53, 0.83, 0.75, 0.67, 0.73, 0.34, 0.01, 0.60, 0.71},
    {0.78, 0.56, 0.78, 0.74, 0.29, 0.40, 0.34, 0.10, 0.69, 0.06, 0.61, 0.13},
    {0.55, 0.80, 0.07, 0.94, 0.49, 0.73, 0.09, 0.68, 0.89, 0.05, 0.80, 0.13},
}};

inline constexpr std::array<double, 12> kExpectedBlock11 = {
    28.12, 23.11, 25.01, 33.84, 19.96, 33.12, 24.12, 35.86, 28.87, 26.42, 24.91, 21.97};

inline constexpr std::array<double, 12> kExpectedBlock34 = {
    37.81, 27.91, 28.25, 35.12, 26.21, 38.62, 28.54, 40.19, 35.05, 30.56, 28.26, 23.91};

inline std::uint64_t fixture_checksum() {
    // position-weighted sum of the two-decimal entries, exact in integers
    std::uint64_t sum = 0;
    std::uint64_t pos = 1;
    for (const auto& block : kExampleA) {
        for (double v : block) {
            sum += pos * static_cast<std::uint64_t>(v * 100.0 + 0.5);
            ++pos;
        }
    }
    for (double v : kExpectedBlock11) {
        sum += pos * static_cast<std::uint64_t>(v * 100.0 + 0.5);
        ++pos;
    }
    for (double v : kExpectedBlock34) {
        sum += pos * static_cast<std::uint64_t>(v * 100.0 + 0.5);
        ++pos;
    }
    return sum;
}

inline constexpr std::uint64_t kFixtureChecksum = 11548654ULL;

} // namespace detail

/// The published 3x4x3x4 input tensor A.
inline DenseTensor example21_tensor() {
    if (detail::fixture_checksum() != detail::kFixtureChecksum) {
        throw std::runtime_error("example fixture corrupted: checksum mismatch");
    }
    DenseTensor a({3, 4, 3, 4});
    std::size_t block = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t j = 0; j < 3; ++j, ++block) {
            for (std::size_t r = 0; r < 3; ++r) {
                for (std::size_t c = 0; c < 4; ++c) {
                    a(r, c, j, k) = detail::kExampleA[block][r * 4 + c];
                }
            }
        }
    }
    return a;
}

/// Published values of B(:,:,1,1), row-major.
inline const std::array<double, 12>& example21_block11() { return detail::kExpectedBlock11; }

/// Published values of B(:,:,3,4), row-major.
inline const std::array<double, 12>& example21_block34() { return detail::kExpectedBlock34; }

} // namespace tensorcalc::fixtures
