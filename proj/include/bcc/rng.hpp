#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcc/bitvec.hpp"

namespace bcc {

/// splitmix64 step; used to derive stream seeds from (master, node, round, ...).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x8f1bbcdcbfa53e0bull;
    for (std::uint64_t p : parts) {
        h = splitmix64(h ^ p);
    }
    return h;
}

/// Deterministic random stream. Draws only raw engine words so sequences are
/// reproducible across standard library implementations (no std distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    bool coin() { return eng_() & 1u; }

    /// `count` uniform bits packed into the low bits of the result, count <= 64.
    std::uint64_t bits(unsigned count) {
        if (count > 64) {
            throw std::invalid_argument("Rng::bits: count > 64");
        }
        if (count == 0) {
            return 0;
        }
        return eng_() >> (64 - count);
    }

    BitVec bitvec(std::size_t length) {
        BitVec v(length);
        for (std::size_t i = 0; i < length; ++i) {
            if (coin()) {
                v.set(i, true);
            }
        }
        return v;
    }

    /// Uniform integer in [0, n) by rejection sampling on masked words.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) {
            throw std::invalid_argument("Rng::below: n must be positive");
        }
        if (n == 1) {
            return 0;
        }
        std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n - 1);
        for (;;) {
            std::uint64_t r = eng_() & mask;
            if (r < n) {
                return r;
            }
        }
    }

private:
    std::mt19937_64 eng_;
};

/// Includes each input vector independently with probability 1/2 and XORs the
/// chosen ones. With an empty input list the caller must supply the result
/// length. One coin is drawn per vector, in order.
inline std::pair<std::vector<std::size_t>, BitVec> random_subset_xor(
    std::span<const BitVec> vectors, Rng& rng,
    std::optional<std::size_t> empty_length = std::nullopt) {
    if (vectors.empty()) {
        if (!empty_length) {
            throw std::invalid_argument("random_subset_xor: empty input without a declared length");
        }
        return {{}, BitVec(*empty_length)};
    }
    const std::size_t len = vectors.front().size();
    std::vector<std::size_t> chosen;
    BitVec sum(len);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != len) {
            throw std::invalid_argument("random_subset_xor: mixed vector lengths");
        }
        if (rng.coin()) {
            chosen.push_back(i);
            sum ^= vectors[i];
        }
    }
    return {std::move(chosen), std::move(sum)};
}

}  // namespace bcc
