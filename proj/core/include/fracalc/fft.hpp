#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fracalc {

std::size_t next_pow2(std::size_t n);

/// In-place iterative radix-2 FFT on a power-of-two length; sign = -1
/// forward, +1 inverse (inverse is unscaled, caller divides by length).
void fft_radix2(std::vector<std::complex<double>>& a, int sign);

}  // namespace fracalc
