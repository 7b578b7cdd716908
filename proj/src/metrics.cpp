#include "geotomo/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace geotomo {

namespace {

// Chessboard distance to the nearest set pixel, two-pass chamfer (exact for
// the L-infinity metric).
std::vector<int> chebyshev_distance_transform(const PixelSet& set) {
    const int n = set.size;
    const int inf = 2 * n + 2;
    std::vector<int> d(static_cast<size_t>(n) * n, inf);
    auto at = [&](int r, int c) -> int& { return d[static_cast<size_t>(r) * n + c]; };

    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (set.contains(r, c)) {
                at(r, c) = 0;
                continue;
            }
            int best = inf;
            if (r > 0) {
                best = std::min(best, at(r - 1, c) + 1);
                if (c > 0) best = std::min(best, at(r - 1, c - 1) + 1);
                if (c + 1 < n) best = std::min(best, at(r - 1, c + 1) + 1);
            }
            if (c > 0) best = std::min(best, at(r, c - 1) + 1);
            at(r, c) = best;
        }
    for (int r = n - 1; r >= 0; --r)
        for (int c = n - 1; c >= 0; --c) {
            int best = at(r, c);
            if (r + 1 < n) {
                best = std::min(best, at(r + 1, c) + 1);
                if (c > 0) best = std::min(best, at(r + 1, c - 1) + 1);
                if (c + 1 < n) best = std::min(best, at(r + 1, c + 1) + 1);
            }
            if (c + 1 < n) best = std::min(best, at(r, c + 1) + 1);
            at(r, c) = best;
        }
    return d;
}

long long directed_hausdorff(const PixelSet& a, const std::vector<int>& dist_to_b) {
    long long worst = 0;
    for (size_t i = 0; i < a.mask.size(); ++i)
        if (a.mask[i]) worst = std::max(worst, static_cast<long long>(dist_to_b[i]));
    return worst;
}

}  // namespace

long long symmetric_difference(const PixelSet& a, const PixelSet& b) {
    if (a.size != b.size) throw std::invalid_argument("pixel set sizes differ");
    long long n = 0;
    for (size_t i = 0; i < a.mask.size(); ++i) n += (a.mask[i] != b.mask[i]) ? 1 : 0;
    return n;
}

long long hausdorff(const PixelSet& a, const PixelSet& b) {
    if (a.size != b.size) throw std::invalid_argument("pixel set sizes differ");
    bool ea = a.empty(), eb = b.empty();
    if (ea && eb) return 0;
    if (ea || eb) return a.size - 1;  // grid diagonal in the Chebyshev metric
    std::vector<int> db = chebyshev_distance_transform(b);
    std::vector<int> da = chebyshev_distance_transform(a);
    return std::max(directed_hausdorff(a, db), directed_hausdorff(b, da));
}

ErrorPair reconstruction_errors(const PixelSet& truth, const PixelSet& recon) {
    ErrorPair e;
    e.delta_s = symmetric_difference(truth, recon);
    bool ea = truth.empty(), eb = recon.empty();
    e.hausdorff_degenerate = ea != eb;
    e.delta_h = hausdorff(truth, recon);
    return e;
}

}  // namespace geotomo
