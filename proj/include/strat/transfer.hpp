#pragma once

#include <span>

#include "strat/core.hpp"

namespace strat {

/// 2×2 transfer matrix mapping (A₋, B₋) to (A₊, B₊).
struct TransferMatrix2 {
    Complex m11{1.0, 0.0};
    Complex m12{};
    Complex m21{};
    Complex m22{1.0, 0.0};

    [[nodiscard]] static TransferMatrix2 identity() { return {}; }
    [[nodiscard]] Complex det() const { return m11 * m22 - m12 * m21; }
    [[nodiscard]] double det_drift() const { return std::abs(det() - 1.0); }

    friend TransferMatrix2 operator*(const TransferMatrix2& l, const TransferMatrix2& r) {
        return {l.m11 * r.m11 + l.m12 * r.m21, l.m11 * r.m12 + l.m12 * r.m22,
                l.m21 * r.m11 + l.m22 * r.m21, l.m21 * r.m12 + l.m22 * r.m22};
    }
};

/// Largest entrywise modulus of the difference.
[[nodiscard]] double max_abs_diff(const TransferMatrix2& a, const TransferMatrix2& b);

/// Left/right reflection and (reciprocal) transmission amplitudes.
struct Amplitudes {
    Complex r_left{};
    Complex r_right{};
    Complex t{1.0, 0.0};
};

/// Below this |M22| the transfer matrix is treated as singular.
inline constexpr double kSingularM22 = 1e-12;

/// T = 1/M22, Rˡ = −M21/M22, Rʳ = M12/M22. Throws SpectralSingularity when |M22| < 1e-12.
[[nodiscard]] Amplitudes amplitudes_from_matrix(const TransferMatrix2& m);

/// Inverse dictionary M = (1/T)[[T² − RˡRʳ, Rʳ], [−Rˡ, 1]]. Requires T ≠ 0.
[[nodiscard]] TransferMatrix2 matrix_from_amplitudes(const Amplitudes& amps);

/// Ordered product ms[0]·ms[1]···ms[n−1]; the rightmost factor is the leftmost slice.
[[nodiscard]] TransferMatrix2 compose(std::span<const TransferMatrix2> ms);

}  // namespace strat
