#include "strat/transfer.hpp"

#include <algorithm>

namespace strat {

double max_abs_diff(const TransferMatrix2& a, const TransferMatrix2& b) {
    return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                     std::abs(a.m22 - b.m22)});
}

Amplitudes amplitudes_from_matrix(const TransferMatrix2& m) {
    if (!(std::abs(m.m22) >= kSingularM22)) {
        throw SpectralSingularity("transfer matrix entry M22 vanishes (|M22| = " +
                                  std::to_string(std::abs(m.m22)) + ")");
    }
    return {-m.m21 / m.m22, m.m12 / m.m22, 1.0 / m.m22};
}

TransferMatrix2 matrix_from_amplitudes(const Amplitudes& amps) {
    if (amps.t == Complex{}) throw InvalidArgument("transmission amplitude is zero; transfer matrix undefined");
    const Complex inv = 1.0 / amps.t;
    return {(amps.t * amps.t - amps.r_left * amps.r_right) * inv, amps.r_right * inv, -amps.r_left * inv, inv};
}

TransferMatrix2 compose(std::span<const TransferMatrix2> ms) {
    if (ms.empty()) throw InvalidArgument("compose needs at least one matrix");
    TransferMatrix2 out = ms.front();
    for (auto it = ms.begin() + 1; it != ms.end(); ++it) out = out * *it;
    return out;
}

}  // namespace strat
