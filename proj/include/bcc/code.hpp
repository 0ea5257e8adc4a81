#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bcc/bitvec.hpp"
#include "bcc/gf2field.hpp"
#include "bcc/util.hpp"

namespace bcc::codes {

/// Sorted, duplicate-free set of codeword indices.
using SupportSet = std::vector<std::size_t>;

enum class Construction { Greedy, PowerMap };

inline std::string to_string(Construction c) {
    return c == Construction::Greedy ? "greedy" : "powermap";
}

inline Construction construction_from_string(const std::string& s) {
    if (s == "greedy") {
        return Construction::Greedy;
    }
    if (s == "powermap") {
        return Construction::PowerMap;
    }
    throw std::invalid_argument("unknown construction: " + s);
}

/// Caps on the memory-hungry parts of code construction. The greedy
/// forbidden-sum set grows as sum_{j<=2a-1} C(M,j) and the decode lookup
/// table as sum_{j<=a/2} C(M,j); both are rejected up front when they
/// would exceed these counts.
struct BuildLimits {
    std::uint64_t forbidden_entries = std::uint64_t{1} << 24;
    std::uint64_t table_entries = std::uint64_t{1} << 22;
};

namespace detail {

inline double subset_count_upper(std::size_t M, std::size_t max_size) {
    double total = 0.0;
    double c = 1.0;  // C(M, 0)
    for (std::size_t j = 0; j <= std::min(max_size, M); ++j) {
        total += c;
        if (total > 1e18) {
            return 1e18;
        }
        c = c * static_cast<double>(M - j) / static_cast<double>(j + 1);
    }
    return total;
}

inline SupportSet symmetric_difference(const SupportSet& a, const SupportSet& b) {
    SupportSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

}  // namespace detail

/// An [M, m, a] bounded-contention code: M codewords of m bits such that
/// XORs of distinct subsets of size <= a are pairwise distinct (equivalently,
/// any 2a codewords are linearly independent over GF(2)).
///
/// Decoding is exhaustive with a meet-in-the-middle table: XORs of all
/// subsets of size <= floor(a/2) are precomputed once per code; a received
/// vector is then matched by enumerating subsets of size <= ceil(bound/2).
class BccCode {
public:
    /// Deterministic column-greedy construction. Candidates are tried in
    /// increasing integer value at trial length m; a candidate is accepted
    /// iff it is not the XOR of any <= 2a-1 previously accepted columns.
    /// When candidates are exhausted the trial length is increased by one
    /// and the search restarts.
    static BccCode build_greedy(std::size_t M, std::size_t a,
                                const BuildLimits& limits = {}) {
        if (M < 1) {
            throw std::invalid_argument("build_greedy: M must be >= 1");
        }
        if (a < 1 || a > M) {
            throw std::invalid_argument("build_greedy: need 1 <= a <= M");
        }
        const std::size_t max_subset = std::min(2 * a - 1, M);
        if (detail::subset_count_upper(M, max_subset) >
            static_cast<double>(limits.forbidden_entries)) {
            throw std::length_error(
                "build_greedy: forbidden-sum set would exceed the configured limit");
        }
        for (std::size_t m = 1; m <= 30; ++m) {
            std::vector<std::uint32_t> cols = greedy_attempt(M, max_subset, m);
            if (cols.size() == M) {
                std::vector<BitVec> columns;
                columns.reserve(M);
                for (std::uint32_t c : cols) {
                    columns.push_back(BitVec::from_uint(c, m));
                }
                return BccCode(std::move(columns), m, a, Construction::Greedy, limits);
            }
        }
        throw std::length_error("build_greedy: no code found within trial length 30");
    }

    /// Evaluation-map construction over GF(2^t), t = ceil(log2(M+1)):
    /// codeword of index u is the concatenation of y, y^3, ..., y^(2a-1)
    /// for the field element y = u + 1 (zero is skipped; a zero column would
    /// break uniqueness). Any 2a columns are linearly independent, m = a*t.
    static BccCode build_powermap(std::size_t M, std::size_t a,
                                  const BuildLimits& limits = {}) {
        if (M < 1) {
            throw std::invalid_argument("build_powermap: M must be >= 1");
        }
        if (a < 1) {
            throw std::invalid_argument("build_powermap: a must be >= 1");
        }
        const std::size_t t = ceil_log2(M + 1);
        if (t > 16) {
            throw std::invalid_argument("build_powermap: M too large (needs GF(2^t), t <= 16)");
        }
        const Gf2Field field(static_cast<unsigned>(t));
        const std::size_t m = a * t;
        std::vector<BitVec> columns;
        columns.reserve(M);
        for (std::size_t u = 0; u < M; ++u) {
            const std::uint32_t y = static_cast<std::uint32_t>(u + 1);
            const std::uint32_t y2 = field.mul(y, y);
            BitVec cw(m);
            std::uint32_t z = y;  // y^(2r+1)
            for (std::size_t r = 0; r < a; ++r) {
                for (std::size_t j = 0; j < t; ++j) {
                    if ((z >> j) & 1u) {
                        cw.set(r * t + j, true);
                    }
                }
                z = field.mul(z, y2);
            }
            columns.push_back(std::move(cw));
        }
        return BccCode(std::move(columns), m, a, Construction::PowerMap, limits);
    }

    /// Rebuild a code from explicit columns (e.g. a codebook file). Unique
    /// decodability at half size is verified as a side effect of building
    /// the decode table.
    static BccCode from_columns(std::vector<BitVec> columns, std::size_t m,
                                std::size_t a, Construction construction,
                                const BuildLimits& limits = {}) {
        return BccCode(std::move(columns), m, a, construction, limits);
    }

    std::size_t size() const { return columns_.size(); }         // M
    std::size_t codeword_bits() const { return m_; }             // m
    std::size_t contention_bound() const { return a_; }          // a
    Construction construction() const { return construction_; }

    const BitVec& encode(std::size_t i) const {
        if (i >= columns_.size()) {
            throw std::out_of_range("BccCode::encode: index out of range");
        }
        return columns_[i];
    }

    /// XOR of the columns indexed by `support` (strictly increasing).
    /// The map is linear, so no size restriction applies.
    BitVec encode_set(std::span<const std::size_t> support) const {
        BitVec sum(m_);
        std::size_t prev = 0;
        bool first = true;
        for (std::size_t i : support) {
            if (!first && i <= prev) {
                throw std::invalid_argument("BccCode::encode_set: support not strictly increasing");
            }
            sum ^= encode(i);
            prev = i;
            first = false;
        }
        return sum;
    }

    /// Unique decoding of a collision: returns the support S with |S| <= bound
    /// and XOR(S) = received if one exists, nullopt otherwise. Requires
    /// bound <= a; any subset of size <= a sharing the received XOR is unique,
    /// so the first meet-in-the-middle hit decides.
    std::optional<SupportSet> decode_sum(const BitVec& received, std::size_t bound) const {
        if (received.size() != m_) {
            throw std::invalid_argument("BccCode::decode_sum: received length != m");
        }
        if (bound > a_) {
            throw std::invalid_argument("BccCode::decode_sum: bound exceeds contention bound a");
        }
        const std::size_t max_left = (bound + 1) / 2;
        SupportSet left;
        std::optional<SupportSet> hit = search(received, 0, max_left, left);
        if (!hit) {
            return std::nullopt;
        }
        if (hit->size() > bound) {
            return std::nullopt;  // unique representation exists but is too large
        }
        return hit;
    }

private:
    BccCode(std::vector<BitVec> columns, std::size_t m, std::size_t a,
            Construction construction, const BuildLimits& limits)
        : columns_(std::move(columns)), m_(m), a_(a), construction_(construction) {
        if (columns_.empty()) {
            throw std::invalid_argument("BccCode: no columns");
        }
        for (const BitVec& c : columns_) {
            if (c.size() != m_) {
                throw std::invalid_argument("BccCode: column length != m");
            }
        }
        build_table(limits);
    }

    // Accepted columns for one trial length, or fewer than M on exhaustion.
    // Forbidden sums are tracked as value -> least subset size in a dense
    // array (values are < 2^m), with an insertion-ordered list for iteration.
    static std::vector<std::uint32_t> greedy_attempt(std::size_t M,
                                                     std::size_t max_subset,
                                                     std::size_t m) {
        const std::uint64_t space = std::uint64_t{1} << m;
        constexpr std::uint8_t kAbsent = 0xFF;
        std::vector<std::uint8_t> size_of(space, kAbsent);
        std::vector<std::uint32_t> values;
        size_of[0] = 0;
        values.push_back(0);
        std::vector<std::uint32_t> cols;
        for (std::uint64_t cand = 1; cand < space; ++cand) {
            if (size_of[cand] != kAbsent) {
                continue;
            }
            cols.push_back(static_cast<std::uint32_t>(cand));
            if (cols.size() == M) {
                return cols;
            }
            const std::size_t n0 = values.size();
            for (std::size_t i = 0; i < n0; ++i) {
                const std::uint32_t v = values[i];
                const std::uint8_t s = size_of[v];
                if (s + 1u > max_subset) {
                    continue;
                }
                const std::uint32_t w = v ^ static_cast<std::uint32_t>(cand);
                if (size_of[w] == kAbsent) {
                    size_of[w] = s + 1;
                    values.push_back(w);
                } else if (size_of[w] > s + 1) {
                    size_of[w] = s + 1;
                }
            }
        }
        return cols;
    }

    void build_table(const BuildLimits& limits) {
        half_ = a_ / 2;
        const double entries = detail::subset_count_upper(columns_.size(), half_);
        if (entries > static_cast<double>(limits.table_entries)) {
            throw std::length_error(
                "BccCode: decode table would exceed the configured limit");
        }
        table_.reserve(static_cast<std::size_t>(entries));
        SupportSet subset;
        enumerate_into_table(0, half_, BitVec(m_), subset);
    }

    void enumerate_into_table(std::size_t start, std::size_t depth_left,
                              const BitVec& acc, SupportSet& subset) {
        auto [it, inserted] = table_.try_emplace(acc, subset);
        if (!inserted) {
            throw std::invalid_argument(
                "BccCode: columns are not uniquely decodable (duplicate subset XOR)");
        }
        if (depth_left == 0) {
            return;
        }
        for (std::size_t i = start; i < columns_.size(); ++i) {
            subset.push_back(i);
            enumerate_into_table(i + 1, depth_left - 1, acc ^ columns_[i], subset);
            subset.pop_back();
        }
    }

    // acc = received XOR encode_set(left).
    std::optional<SupportSet> search(const BitVec& acc, std::size_t start,
                                     std::size_t depth_left, SupportSet& left) const {
        auto it = table_.find(acc);
        if (it != table_.end()) {
            return detail::symmetric_difference(left, it->second);
        }
        if (depth_left == 0) {
            return std::nullopt;
        }
        for (std::size_t i = start; i < columns_.size(); ++i) {
            left.push_back(i);
            auto r = search(acc ^ columns_[i], i + 1, depth_left - 1, left);
            left.pop_back();
            if (r) {
                return r;
            }
        }
        return std::nullopt;
    }

    std::vector<BitVec> columns_;
    std::size_t m_;
    std::size_t a_;
    Construction construction_;
    std::size_t half_ = 0;
    std::unordered_map<BitVec, SupportSet, BitVecHash> table_;
};

/// Packs (node id, payload) pairs into the index space of a codebook over
/// M = 2^(id_bits + payload_bits) messages: index = id * 2^payload_bits + payload.
struct IndexSpace {
    std::size_t id_bits;
    std::size_t payload_bits;

    std::size_t size() const {
        if (id_bits + payload_bits > 48) {
            throw std::invalid_argument("IndexSpace: too many bits");
        }
        return std::size_t{1} << (id_bits + payload_bits);
    }

    std::size_t pack(std::size_t id, const BitVec& payload) const {
        if (id >= (std::size_t{1} << id_bits)) {
            throw std::out_of_range("IndexSpace::pack: id out of range");
        }
        if (payload.size() != payload_bits) {
            throw std::invalid_argument("IndexSpace::pack: payload length mismatch");
        }
        return (id << payload_bits) + static_cast<std::size_t>(payload.to_uint());
    }

    std::pair<std::size_t, BitVec> unpack(std::size_t index) const {
        if (index >= size()) {
            throw std::out_of_range("IndexSpace::unpack: index out of range");
        }
        const std::size_t id = index >> payload_bits;
        const std::uint64_t p = index & ((std::uint64_t{1} << payload_bits) - 1);
        return {id, BitVec::from_uint(p, payload_bits)};
    }
};

/// Codebook text format: header "M m a construction", then one codeword per
/// line as a binary string (bit 0 first).
inline void write_codebook(std::ostream& os, const BccCode& code) {
    os << code.size() << ' ' << code.codeword_bits() << ' ' << code.contention_bound()
       << ' ' << to_string(code.construction()) << '\n';
    for (std::size_t i = 0; i < code.size(); ++i) {
        os << code.encode(i).to_string() << '\n';
    }
}

inline BccCode read_codebook(std::istream& is, const BuildLimits& limits = {}) {
    std::size_t M = 0;
    std::size_t m = 0;
    std::size_t a = 0;
    std::string cons;
    if (!(is >> M >> m >> a >> cons)) {
        throw std::invalid_argument("read_codebook: malformed header");
    }
    std::vector<BitVec> columns;
    columns.reserve(M);
    for (std::size_t i = 0; i < M; ++i) {
        std::string line;
        if (!(is >> line) || line.size() != m) {
            throw std::invalid_argument("read_codebook: malformed codeword line");
        }
        columns.push_back(BitVec::from_string(line));
    }
    return BccCode::from_columns(std::move(columns), m, a,
                                 construction_from_string(cons), limits);
}

}  // namespace bcc::codes
