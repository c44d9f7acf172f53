#pragma once

#include <vector>

namespace motifcc {

// Kernel selection for length-q circular convolution. Auto picks the direct
// O(q^2) loop below q = 128 (wins comfortably at q = 67) and a zero-padded
// power-of-two FFT above.
enum class ConvMode { Auto, Direct, Fft };

// out[c] = sum_{a+b ≡ c (mod q)} x[a]·y[b]. out must not alias x or y.
void circular_convolve(const double* x, const double* y, double* out, int q,
                       ConvMode mode = ConvMode::Auto);

std::vector<double> circular_convolve(const std::vector<double>& x, const std::vector<double>& y,
                                      ConvMode mode = ConvMode::Auto);

}  // namespace motifcc
