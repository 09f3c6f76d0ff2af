#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace hybridcast {

// Sentinel for "no path within the hop budget". Never a large-but-finite stand-in.
inline constexpr long long kInfDistance = std::numeric_limits<long long>::max();

// Deterministic splitmix64 generator. We avoid <random> distributions because
// their output is implementation-defined and transcripts must be reproducible
// byte-for-byte across platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound), bound >= 1, via rejection sampling.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // Bernoulli with probability num/den in exact integer arithmetic.
    bool chance(std::uint64_t num, std::uint64_t den) {
        if (den == 0) throw std::invalid_argument("Rng::chance: zero denominator");
        if (num >= den) return true;
        return below(den) < num;
    }
};

inline int ceil_log2(long long n) {
    if (n <= 1) return 1;
    int b = 0;
    long long v = 1;
    while (v < n) {
        v <<= 1;
        ++b;
    }
    return b;
}

inline long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

// Packs small non-negative fields into one 64-bit payload word; throws when the
// value genuinely does not fit rather than truncating.
inline std::uint64_t pack_fields(std::uint64_t a, int a_bits, std::uint64_t b, int b_bits,
                                 std::uint64_t c, int c_bits) {
    if (a_bits + b_bits + c_bits > 64)
        throw std::overflow_error("pack_fields: field widths exceed 64 bits");
    auto check = [](std::uint64_t v, int bits) {
        if (bits < 64 && v >= (std::uint64_t{1} << bits))
            throw std::overflow_error("pack_fields: value " + std::to_string(v) +
                                      " does not fit in " + std::to_string(bits) + " bits");
    };
    check(a, a_bits);
    check(b, b_bits);
    check(c, c_bits);
    return (a << (b_bits + c_bits)) | (b << c_bits) | c;
}

inline std::uint64_t unpack_field(std::uint64_t word, int shift, int bits) {
    std::uint64_t mask = bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
    return (word >> shift) & mask;
}

}  // namespace hybridcast
