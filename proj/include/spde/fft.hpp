#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace spde {

// Iterative radix-2 transform for a fixed power-of-two size.  The twiddle
// and bit-reversal tables are built once at construction; forward/inverse
// are const and safe to call from several threads on disjoint buffers.
class Radix2Fft {
public:
    explicit Radix2Fft(std::size_t n);

    // In-place DFT with kernel exp(-2*pi*i*j*k/n).
    void forward(std::vector<std::complex<double>>& a) const;
    // In-place inverse including the 1/n factor.
    void inverse(std::vector<std::complex<double>>& a) const;

    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<std::complex<double>> twiddle_;  // exp(-2*pi*i*j/n), j < n/2
    std::vector<std::uint32_t> reverse_;

    void transform(std::vector<std::complex<double>>& a, bool inverse) const;
};

}  // namespace spde
