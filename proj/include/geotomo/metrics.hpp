#pragma once

#include "geotomo/grid.hpp"

namespace geotomo {

/// delta_S / delta_H reconstruction errors.
struct ErrorPair {
    long long delta_s = 0;
    long long delta_h = 0;
    bool hausdorff_degenerate = false;  // one side empty: delta_h is the grid diagonal
};

/// |A symmetric-difference B|. Grids must have equal size.
long long symmetric_difference(const PixelSet& a, const PixelSet& b);

/// Chebyshev (L-infinity) Hausdorff distance, computed with a two-pass
/// chessboard distance transform. Both sets empty gives 0; one empty side
/// gives the grid diagonal (flagged via hausdorff() overload below).
long long hausdorff(const PixelSet& a, const PixelSet& b);

/// Full error pair with the empty-set flag.
ErrorPair reconstruction_errors(const PixelSet& truth, const PixelSet& recon);

}  // namespace geotomo
