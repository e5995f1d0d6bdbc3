#include "gphl/fft.hpp"

#include <cmath>

namespace gphl {

namespace {

// Twiddle tables per (n, direction); n <= 64^3 in practice so the cache stays
// tiny. Not thread-safe to mutate concurrently; all users build tables on the
// main thread before any parallel section.
const std::vector<cplx>& twiddles(std::size_t n, bool inverse) {
  static std::vector<std::vector<cplx>> fwd(31), inv(31);
  int lg = ilog2(n);
  auto& slot = inverse ? inv[lg] : fwd[lg];
  if (slot.empty()) {
    slot.resize(n / 2);
    double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
      double ang = sign * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
      slot[k] = cplx(std::cos(ang), std::sin(ang));
    }
  }
  return slot;
}

}  // namespace

void fft_inplace(cplx* a, std::size_t n, bool inverse) {
  if (n <= 1) return;
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto& tw = twiddles(n, inverse);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * tw[k * step];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    double s = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) a[i] *= s;
  }
}

void fft_inplace(std::vector<cplx>& data, bool inverse) {
  fft_inplace(data.data(), data.size(), inverse);
}

void fft_axis(cplx* data, std::size_t rank, std::size_t n, std::size_t axis, bool inverse) {
  // Row-major strides: axis r has stride n^(rank-1-r).
  std::size_t stride = 1;
  for (std::size_t r = axis + 1; r < rank; ++r) stride *= n;
  std::size_t total = 1;
  for (std::size_t r = 0; r < rank; ++r) total *= n;
  std::size_t lines = total / n;
  std::vector<cplx> line(n);
  // Enumerate line origins: indices whose axis-`axis` digit is zero.
  std::size_t block = stride * n;
  for (std::size_t li = 0; li < lines; ++li) {
    std::size_t outer = li / stride;
    std::size_t inner = li % stride;
    std::size_t base = outer * block + inner;
    for (std::size_t k = 0; k < n; ++k) line[k] = data[base + k * stride];
    fft_inplace(line.data(), n, inverse);
    for (std::size_t k = 0; k < n; ++k) data[base + k * stride] = line[k];
  }
}

}  // namespace gphl
