#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace bcc {

/// GF(2^t) arithmetic for t in [1, 16], polynomial basis. Elements are the
/// low t bits of a uint32 (bit j = coefficient of x^j).
class Gf2Field {
public:
    explicit Gf2Field(unsigned degree) : degree_(degree) {
        if (degree < 1 || degree > 16) {
            throw std::invalid_argument("Gf2Field: degree must be in [1, 16]");
        }
        modulus_ = kIrreducible[degree];
    }

    unsigned degree() const { return degree_; }
    std::uint32_t order() const { return (std::uint32_t{1} << degree_) - 1; }
    std::uint32_t modulus() const { return modulus_; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        check(a);
        check(b);
        std::uint32_t acc = 0;
        while (b != 0) {
            if (b & 1u) {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if (a & (std::uint32_t{1} << degree_)) {
                a ^= modulus_;
            }
        }
        return acc;
    }

    std::uint32_t pow(std::uint32_t base, std::uint64_t e) const {
        check(base);
        std::uint32_t acc = 1;
        while (e != 0) {
            if (e & 1u) {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

private:
    void check(std::uint32_t v) const {
        if (v >> degree_) {
            throw std::invalid_argument("Gf2Field: element out of range");
        }
    }

    // Irreducible polynomial per degree (index = t), including the x^t term.
    static constexpr std::array<std::uint32_t, 17> kIrreducible = {
        0,       // unused
        0x3,     // x + 1
        0x7,     // x^2 + x + 1
        0xb,     // x^3 + x + 1
        0x13,    // x^4 + x + 1
        0x25,    // x^5 + x^2 + 1
        0x43,    // x^6 + x + 1
        0x83,    // x^7 + x + 1
        0x11d,   // x^8 + x^4 + x^3 + x^2 + 1
        0x211,   // x^9 + x^4 + 1
        0x409,   // x^10 + x^3 + 1
        0x805,   // x^11 + x^2 + 1
        0x1053,  // x^12 + x^6 + x^4 + x + 1
        0x201b,  // x^13 + x^4 + x^3 + x + 1
        0x4443,  // x^14 + x^10 + x^6 + x + 1
        0x8003,  // x^15 + x + 1
        0x1100b, // x^16 + x^12 + x^3 + x + 1
    };

    unsigned degree_;
    std::uint32_t modulus_;
};

}  // namespace bcc
