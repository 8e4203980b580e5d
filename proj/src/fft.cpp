#include "spde/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace spde {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Radix2Fft::Radix2Fft(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("Radix2Fft: size must be a power of two");
    if (n >> 32) throw std::invalid_argument("Radix2Fft: size too large");

    twiddle_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        double angle = -kTwoPi * double(j) / double(n);
        twiddle_[j] = {std::cos(angle), std::sin(angle)};
    }

    reverse_.resize(n);
    std::uint32_t bits = 0;
    while ((std::size_t(1) << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t r = 0;
        for (std::uint32_t b = 0; b < bits; ++b)
            if (i & (std::size_t(1) << b)) r |= std::uint32_t(1) << (bits - 1 - b);
        reverse_[i] = r;
    }
}

void Radix2Fft::transform(std::vector<std::complex<double>>& a, bool inverse) const {
    if (a.size() != n_) throw std::invalid_argument("Radix2Fft: buffer size mismatch");

    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t r = reverse_[i];
        if (i < r) std::swap(a[i], a[r]);
    }

    for (std::size_t len = 2; len <= n_; len <<= 1) {
        std::size_t half = len >> 1;
        std::size_t stride = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            for (std::size_t j = 0; j < half; ++j) {
                std::complex<double> w = twiddle_[j * stride];
                if (inverse) w = std::conj(w);
                std::complex<double>& lo = a[start + j];
                std::complex<double>& hi = a[start + j + half];
                std::complex<double> t = w * hi;
                hi = lo - t;
                lo += t;
            }
        }
    }

    if (inverse) {
        double scale = 1.0 / double(n_);
        for (auto& v : a) v *= scale;
    }
}

void Radix2Fft::forward(std::vector<std::complex<double>>& a) const { transform(a, false); }
void Radix2Fft::inverse(std::vector<std::complex<double>>& a) const { transform(a, true); }

}  // namespace spde
