#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace spde {

// Philox4x32-10 block cipher.  Stateless: maps a 128-bit counter and a
// 64-bit key to four independent 32-bit words.
class Philox4x32 {
public:
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);
};

// An addressable lane of standard normal draws.  The lane identity is
// (seed, run, mode, tag); draw i depends only on that identity and i, so
// any thread may evaluate any index without coordination.  Draws 2j and
// 2j+1 come from one counter block via the Box-Muller transform.
class GaussianSubstream {
public:
    GaussianSubstream(std::uint64_t seed, std::uint32_t run, std::uint32_t mode,
                      std::uint32_t tag = 0);

    double operator()(std::uint64_t i) const;

    // dst[0..count) = draws 0..count-1; each counter block evaluated once.
    void fill(double* dst, std::uint64_t count) const;
    std::vector<double> draw(std::uint64_t count) const;

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t run_, mode_, tag_;

    std::array<double, 2> pair(std::uint64_t block_index) const;
};

}  // namespace spde
