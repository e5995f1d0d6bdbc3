#pragma once

#include <cstddef>
#include <vector>

#include "gphl/common.hpp"

namespace gphl {

// Iterative radix-2 transforms on power-of-two lengths. Forward uses the
// e^{-i xi x} sign convention and no normalization; inverse carries the 1/n.
void fft_inplace(cplx* data, std::size_t n, bool inverse);

void fft_inplace(std::vector<cplx>& data, bool inverse);

// Transform every axis-`axis` line of a row-major tensor with `rank` axes of
// `n` points each. Lines are gathered into a contiguous scratch buffer and
// scattered back, which keeps the butterfly cache-friendly for any stride.
void fft_axis(cplx* data, std::size_t rank, std::size_t n, std::size_t axis, bool inverse);

}  // namespace gphl
