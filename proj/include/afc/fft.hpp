#pragma once

#include <complex>
#include <span>
#include <vector>

namespace afc::fft {

using cplx = std::complex<double>;

// Unnormalized DFTs backed by FFTW.
//   forward:  X[k] = sum_j x[j] exp(-2 pi i jk/n)
//   backward: X[k] = sum_j x[j] exp(+2 pi i jk/n)
// Plans are cached per size; safe to call from several threads.
std::vector<cplx> forward(std::span<const cplx> x);
std::vector<cplx> backward(std::span<const cplx> x);

// Rotate between ascending-frequency order (DC at n/2) and FFT order (DC at 0).
template <typename T>
std::vector<T> ifftshift(std::span<const T> x) {
    const std::size_t n = x.size(), h = n / 2;
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[(i + h) % n];
    return out;
}

template <typename T>
std::vector<T> fftshift(std::span<const T> x) {
    const std::size_t n = x.size(), h = n - n / 2;
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[(i + h) % n];
    return out;
}

} // namespace afc::fft
