#pragma once

#include <complex>
#include <vector>

namespace semirv {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse);

// Linear convolution of two real nonnegative sequences.  Uses direct
// summation when the output is short, zero-padded cyclic FFT convolution
// otherwise; tiny negative round-off results are clamped to zero.
std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b,
                             std::size_t direct_threshold = 4096);

}  // namespace semirv
