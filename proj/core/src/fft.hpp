#pragma once

#include <complex>
#include <cstddef>

namespace weylab::detail {

// In-place centered DFT along the axes selected by axis_mask (bit a = axis a)
// of an n^D row-major array: A(k) = sum_j f(j) exp(sign * 2 pi i j k / n) with
// j, k centered in [-n/2, n/2). Unnormalized.
void centered_dft(std::complex<double>* data, int D, int n, unsigned axis_mask, int sign);

} // namespace weylab::detail
