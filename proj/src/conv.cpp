#include "motifcc/conv.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace motifcc {

namespace {

void convolve_direct(const double* x, const double* y, double* out, int q) {
  for (int c = 0; c < q; ++c) out[c] = 0.0;
  for (int a = 0; a < q; ++a) {
    const double xa = x[a];
    if (xa == 0.0) continue;
    // c = a + b wraps once at most: split into the two contiguous runs so the
    // inner loops stay unit-stride FMAs.
    const int wrap = q - a;
    double* hi = out + a;
    for (int b = 0; b < wrap; ++b) hi[b] += xa * y[b];
    double* lo = out - wrap;
    for (int b = wrap; b < q; ++b) lo[b] += xa * y[b];
  }
}

constexpr double kPi = 3.141592653589793238462643383279502884;

// Iterative radix-2 Cooley-Tukey, size must be a power of two.
void fft_inplace(std::complex<double>* a, int size, bool inverse) {
  for (int i = 1, j = 0; i < size; ++i) {
    int bit = size >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= size; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / len;
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < size; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / size;
    for (int i = 0; i < size; ++i) a[i] *= s;
  }
}

struct FftScratch {
  std::vector<std::complex<double>> fa, fb;
};

void convolve_fft(const double* x, const double* y, double* out, int q) {
  // Linear convolution of length 2q-1 on the next power of two, then fold the
  // tail back to get the circular result.
  int size = 1;
  while (size < 2 * q - 1) size <<= 1;
  thread_local std::map<int, FftScratch> scratch_by_size;
  FftScratch& s = scratch_by_size[size];
  s.fa.assign(static_cast<std::size_t>(size), {0.0, 0.0});
  s.fb.assign(static_cast<std::size_t>(size), {0.0, 0.0});
  for (int i = 0; i < q; ++i) {
    s.fa[static_cast<std::size_t>(i)] = x[i];
    s.fb[static_cast<std::size_t>(i)] = y[i];
  }
  fft_inplace(s.fa.data(), size, false);
  fft_inplace(s.fb.data(), size, false);
  for (int i = 0; i < size; ++i) s.fa[static_cast<std::size_t>(i)] *= s.fb[static_cast<std::size_t>(i)];
  fft_inplace(s.fa.data(), size, true);
  for (int c = 0; c < q; ++c) {
    double v = s.fa[static_cast<std::size_t>(c)].real();
    if (c + q < 2 * q - 1) v += s.fa[static_cast<std::size_t>(c + q)].real();
    out[c] = v;
  }
}

}  // namespace

void circular_convolve(const double* x, const double* y, double* out, int q, ConvMode mode) {
  if (q < 1) throw std::domain_error("circular_convolve: q must be >= 1");
  if (mode == ConvMode::Auto) mode = q < 128 ? ConvMode::Direct : ConvMode::Fft;
  if (mode == ConvMode::Direct)
    convolve_direct(x, y, out, q);
  else
    convolve_fft(x, y, out, q);
}

std::vector<double> circular_convolve(const std::vector<double>& x, const std::vector<double>& y,
                                      ConvMode mode) {
  if (x.size() != y.size()) throw std::domain_error("circular_convolve: length mismatch");
  std::vector<double> out(x.size());
  circular_convolve(x.data(), y.data(), out.data(), static_cast<int>(x.size()), mode);
  return out;
}

}  // namespace motifcc
