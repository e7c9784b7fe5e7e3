#pragma once

// Thin FFTW wrapper. Plans are cached per size; execution is thread-safe.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace stable_lab::fft {

using Complex = std::complex<double>;

/// Real-to-complex transform of `in` zero-padded to length n (n/2 + 1 outputs).
std::vector<Complex> forward_real(std::span<const double> in, std::size_t n);

/// Unnormalized inverse of forward_real: returns n real samples.
std::vector<double> inverse_real(std::span<const Complex> spectrum, std::size_t n);

/// out[m] = sum_j in[j] exp(+2 pi i j m / n), unnormalized.
std::vector<Complex> backward_complex(std::span<const Complex> in);

}  // namespace stable_lab::fft
