#pragma once

#include <complex>
#include <vector>

namespace rriqa::detail {

using ComplexGrid = std::vector<std::complex<double>>;

/// In-place 2-D DFT of a row-major height x width grid (FFTW). The inverse is
/// unnormalized.
void fft2(ComplexGrid& grid, int width, int height, bool inverse);

}  // namespace rriqa::detail
