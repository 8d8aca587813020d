#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace modlab::detail {

// Unnormalized in-place DFTs. Forward uses exp(-2 pi i jk/n), backward
// exp(+2 pi i jk/n). Safe to call concurrently.
void fft_forward(std::span<std::complex<double>> data);
void fft_backward(std::span<std::complex<double>> data);

// Row-major n0 x n1 two-dimensional transforms.
void fft2_forward(std::span<std::complex<double>> data, std::size_t n0, std::size_t n1);
void fft2_backward(std::span<std::complex<double>> data, std::size_t n0, std::size_t n1);

}  // namespace modlab::detail
