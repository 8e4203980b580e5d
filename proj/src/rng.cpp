#include "spde/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace spde {

namespace {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = std::uint64_t(kMult0) * ctr[0];
        std::uint64_t p1 = std::uint64_t(kMult1) * ctr[2];
        std::array<std::uint32_t, 4> next;
        next[0] = std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0];
        next[1] = std::uint32_t(p1);
        next[2] = std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1];
        next[3] = std::uint32_t(p0);
        ctr = next;
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

GaussianSubstream::GaussianSubstream(std::uint64_t seed, std::uint32_t run,
                                     std::uint32_t mode, std::uint32_t tag)
    : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, run_(run), mode_(mode), tag_(tag) {}

std::array<double, 2> GaussianSubstream::pair(std::uint64_t block_index) const {
    if (block_index >> 32)
        throw std::invalid_argument("GaussianSubstream: draw index out of range");
    std::array<std::uint32_t, 4> ctr = {std::uint32_t(block_index), mode_, run_, tag_};
    std::array<std::uint32_t, 4> w = Philox4x32::block(ctr, key_);
    // u1 in (0,1] so log(u1) is finite; u2 in [0,1).
    std::uint64_t b1 = (std::uint64_t(w[0]) << 32 | w[1]) >> 11;
    std::uint64_t b2 = (std::uint64_t(w[2]) << 32 | w[3]) >> 11;
    double u1 = double(b1 + 1) * 0x1.0p-53;
    double u2 = double(b2) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = kTwoPi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

double GaussianSubstream::operator()(std::uint64_t i) const {
    return pair(i >> 1)[i & 1];
}

void GaussianSubstream::fill(double* dst, std::uint64_t count) const {
    std::uint64_t full = count / 2;
    for (std::uint64_t b = 0; b < full; ++b) {
        std::array<double, 2> z = pair(b);
        dst[2 * b] = z[0];
        dst[2 * b + 1] = z[1];
    }
    if (count & 1) dst[count - 1] = pair(full)[0];
}

std::vector<double> GaussianSubstream::draw(std::uint64_t count) const {
    std::vector<double> out(count);
    fill(out.data(), count);
    return out;
}

}  // namespace spde
