#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ebc {

/// Normalized sinc, sin(pi x) / (pi x).
double sinc(double x);

/// Exact evaluation of a finite cardinal series
///
///   y_n = sum_{k=0}^{K-1} c_k * sinc(x_n - k),   x_n = origin + n * num / den
///
/// on a rational lattice of abscissae. Every term of the series is kept; the
/// sum is organized by residue class of x_n modulo 1, where it becomes a
/// Toeplitz product computed by zero-padded FFT convolution. Results agree
/// with direct summation to rounding error.
///
/// Construction precomputes the kernel spectra; evaluate() is const and may
/// be called concurrently from several threads.
class CardinalSeries {
public:
    CardinalSeries(std::size_t n_coeffs, std::int64_t origin, std::int64_t num, std::int64_t den,
                   std::size_t n_out);

    std::vector<double> evaluate(std::span<const double> coeffs) const;

    std::size_t n_coeffs() const { return n_coeffs_; }
    std::size_t n_out() const { return n_out_; }

private:
    std::size_t n_coeffs_;
    std::int64_t origin_;
    std::int64_t num_;
    std::int64_t den_;
    std::size_t n_out_;

    std::int64_t m_first_ = 0;   // floor(x_0)
    std::size_t m_span_ = 0;     // number of integer parts covered
    std::size_t fft_size_ = 0;
    // kernels_[r] holds the spectrum for residue r / den; index 0 unused.
    std::vector<std::vector<std::complex<double>>> kernels_;
};

/// Direct O(N K) summation of the same series at arbitrary abscissae. Slow;
/// used where no lattice structure exists and as a cross-check.
std::vector<double> cardinal_series_direct(std::span<const double> coeffs, std::span<const double> x);

} // namespace ebc
