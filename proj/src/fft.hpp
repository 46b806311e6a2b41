#pragma once

// Thin FFTW wrapper. Plans are cached per shape and created with
// FFTW_UNALIGNED so one plan serves every buffer of that shape; only the
// planner is serialized, execution is reentrant.

#include <complex>
#include <cstddef>
#include <vector>

namespace xsb::fft {

enum Direction : int { forward = -1, backward = +1 };

/// Unnormalized in-place DFT over all axes of a row-major array.
void transform(std::complex<double>* data, const std::vector<int>& dims, Direction dir);

/// Unnormalized in-place DFT along the contiguous last axis of `rows` rows.
void transform_rows(std::complex<double>* data, std::size_t rows, int len, Direction dir);

/// Unnormalized in-place DFT along the leading axes `dims`, batched over a
/// contiguous trailing axis of length `inner` (stride `inner`, distance 1).
void transform_leading(std::complex<double>* data, const std::vector<int>& dims, int inner,
                       Direction dir);

}  // namespace xsb::fft
