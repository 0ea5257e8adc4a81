#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace bcc {

/// ceil(log2(x)), clamped to a minimum of 1. Bit widths are integers >= 1.
inline std::size_t ceil_log2(std::uint64_t x) {
    if (x == 0) {
        throw std::invalid_argument("ceil_log2: x must be positive");
    }
    std::size_t bits = 1;
    while ((std::uint64_t{1} << bits) < x) {
        ++bits;
        if (bits >= 63) {
            break;
        }
    }
    return bits;
}

}  // namespace bcc
