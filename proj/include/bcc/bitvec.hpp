#pragma once

#include <cstddef>
#include <cstdint>
#include <bit>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bcc {

/// Fixed-length bit vector over GF(2), packed into 64-bit words.
///
/// The length is fixed at construction; operations on mismatched lengths
/// throw. Bits past the length are kept zero (the tail word is masked after
/// every mutation), so word-wise equality and hashing are exact.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t length)
        : len_(length), words_(word_count(length), 0) {}

    /// Low `length` bits of `value`, bit i of the vector = bit i of value.
    static BitVec from_uint(std::uint64_t value, std::size_t length) {
        if (length < 64 && length > 0 && (value >> length) != 0) {
            throw std::invalid_argument("BitVec::from_uint: value does not fit length");
        }
        BitVec v(length);
        if (length > 0) {
            v.words_[0] = length >= 64 ? value : (value & mask(length));
        }
        return v;
    }

    /// Parse a string of '0'/'1'; character i becomes bit i.
    static BitVec from_string(std::string_view s) {
        BitVec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') {
                v.set(i, true);
            } else if (s[i] != '0') {
                throw std::invalid_argument("BitVec::from_string: invalid character");
            }
        }
        return v;
    }

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool value) {
        check_index(i);
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= bit;
        } else {
            words_[i >> 6] &= ~bit;
        }
    }

    BitVec& operator^=(const BitVec& other) {
        if (other.len_ != len_) {
            throw std::invalid_argument("BitVec: length mismatch in xor");
        }
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }

    friend BitVec operator^(BitVec a, const BitVec& b) {
        a ^= b;
        return a;
    }

    bool operator==(const BitVec&) const = default;

    bool is_zero() const {
        for (std::uint64_t w : words_) {
            if (w != 0) {
                return false;
            }
        }
        return true;
    }

    bool any() const { return !is_zero(); }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    /// Index of the lowest set bit, or size() if the vector is zero.
    std::size_t find_first() const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] != 0) {
                return (w << 6) + static_cast<std::size_t>(std::countr_zero(words_[w]));
            }
        }
        return len_;
    }

    /// GF(2) inner product.
    friend bool dot(const BitVec& a, const BitVec& b) {
        if (a.len_ != b.len_) {
            throw std::invalid_argument("BitVec: length mismatch in dot");
        }
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < a.words_.size(); ++w) {
            acc ^= a.words_[w] & b.words_[w];
        }
        return std::popcount(acc) & 1u;
    }

    /// Value as an integer; requires size() <= 64.
    std::uint64_t to_uint() const {
        if (len_ > 64) {
            throw std::invalid_argument("BitVec::to_uint: vector wider than 64 bits");
        }
        return words_.empty() ? 0 : words_[0];
    }

    std::string to_string() const {
        std::string s(len_, '0');
        for (std::size_t i = 0; i < len_; ++i) {
            if (get(i)) {
                s[i] = '1';
            }
        }
        return s;
    }

    /// Bits [from, from + count).
    BitVec slice(std::size_t from, std::size_t count) const {
        if (from + count > len_) {
            throw std::out_of_range("BitVec::slice: range out of bounds");
        }
        BitVec out(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (get(from + i)) {
                out.set(i, true);
            }
        }
        return out;
    }

    static BitVec concat(const BitVec& a, const BitVec& b) {
        BitVec out(a.len_ + b.len_);
        for (std::size_t i = 0; i < a.len_; ++i) {
            if (a.get(i)) {
                out.set(i, true);
            }
        }
        for (std::size_t i = 0; i < b.len_; ++i) {
            if (b.get(i)) {
                out.set(a.len_ + i, true);
            }
        }
        return out;
    }

    std::span<const std::uint64_t> words() const { return words_; }

private:
    static std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

    static std::uint64_t mask(std::size_t bits) {
        return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
    }

    void check_index(std::size_t i) const {
        if (i >= len_) {
            throw std::out_of_range("BitVec: bit index out of range");
        }
    }

    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitVecHash {
    std::size_t operator()(const BitVec& v) const {
        std::uint64_t h = 0xcbf29ce484222325ull ^ (v.size() * 0x100000001b3ull);
        for (std::uint64_t w : v.words()) {
            h ^= w;
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace bcc
