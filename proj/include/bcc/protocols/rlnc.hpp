#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcc/bitmatrix.hpp"
#include "bcc/code.hpp"
#include "bcc/engine.hpp"
#include "bcc/protocols/local.hpp"
#include "bcc/rng.hpp"
#include "bcc/util.hpp"

namespace bcc::proto {

/// Header representation for RLNC packets.
///  Plain — coefficient vector over the full ID space (N bits).
///  Coded — BCC-coded coefficient vector in a fixed field of
///          a * ceil(log2 N) bits (codeword zero-padded to the field width).
///  Basis — standard basis over the known sender set (a' bits), as used
///          after contention estimation.
enum class HeaderMode { Plain, Coded, Basis };

struct RlncParams {
    std::size_t n = 0;
    std::size_t id_space = 0;  // N
    std::size_t a = 0;         // contention bound (ignored for Basis)
    std::size_t ell = 0;
    std::size_t rounds = 0;    // e.g. 32 * (D + a + ceil(log2 N))
    HeaderMode header = HeaderMode::Plain;
    const codes::BccCode* code = nullptr;   // required for Coded
    std::size_t header_field_bits = 0;      // 0 -> mode default
    bool require_connected = false;         // dynamic runs
    bool check_validity = true;             // ground-truth packet assertions
};

struct RlncResult {
    air::RunMetrics metrics;
    std::vector<std::size_t> decode_round;  // first round with full span; npos if never
    std::vector<std::size_t> final_rank;
    std::size_t packet_bits = 0;
    std::size_t header_bits = 0;
    bool violation = false;
    bool all_success = false;

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

namespace detail {

class RlncProtocol : public air::RoundProtocol {
public:
    RlncProtocol(const RlncParams& params, const std::vector<Sender>& senders,
                 std::size_t header_bits, std::size_t mu_bits)
        : params_(params),
          header_bits_(header_bits),
          mu_bits_(mu_bits),
          packet_bits_(header_bits + params.ell),
          sender_ids_(sorted_sender_ids(senders)) {
        packets_.resize(params.n);
        basis_.assign(params.n, RowBasis(mu_bits));
        decode_round_.assign(params.n, RlncResult::npos);
        for (const Sender& s : senders) {
            if (s.payload.size() != params.ell) {
                throw std::invalid_argument("rlnc: payload length != ell");
            }
            payload_of_[s.node] = s.payload;
        }
        for (const Sender& s : senders) {
            BitVec wire = BitVec::concat(initial_header(s.node), s.payload);
            packets_[s.node].push_back(std::move(wire));
            basis_[s.node].insert(initial_mu(s.node));
            note_rank(s.node, 0);
        }
    }

    std::size_t node_count() const override { return params_.n; }
    bool finished() const override { return round_ >= params_.rounds; }
    std::vector<std::size_t> round_widths() override { return {packet_bits_}; }

    air::SlotIntent intent(std::size_t, std::size_t node, Rng& rng) override {
        // With probability 1/2 listen; otherwise send the XOR of a random
        // subset of the packets received so far (possibly the zero packet).
        if (rng.coin()) {
            return air::SlotIntent::listen();
        }
        auto [chosen, sum] = random_subset_xor(packets_[node], rng, packet_bits_);
        return air::SlotIntent::transmit(std::move(sum));
    }

    void receive(std::size_t, std::size_t node, const std::optional<BitVec>& rx,
                 Rng&) override {
        if (!rx || !rx->any()) {
            return;
        }
        std::optional<BitVec> mu = extract_mu(*rx);
        if (!mu) {
            violation_ = true;  // undecodable coded header: model violation
            return;
        }
        if (params_.check_validity && !packet_valid(*mu, *rx)) {
            violation_ = true;
        }
        packets_[node].push_back(*rx);
        basis_[node].insert(std::move(*mu));
        note_rank(node, round_ + 1);
    }

    void end_round(std::size_t) override { ++round_; }

    std::vector<std::size_t> decode_round_;
    std::vector<RowBasis> basis_;
    bool violation_ = false;

private:
    BitVec initial_header(std::size_t node) const {
        BitVec h(header_bits_);
        switch (params_.header) {
            case HeaderMode::Plain:
                h.set(node, true);
                break;
            case HeaderMode::Coded: {
                const BitVec& cw = params_.code->encode(node);
                for (std::size_t i = 0; i < cw.size(); ++i) {
                    if (cw.get(i)) {
                        h.set(i, true);
                    }
                }
                break;
            }
            case HeaderMode::Basis:
                h.set(sender_rank(node), true);
                break;
        }
        return h;
    }

    BitVec initial_mu(std::size_t node) const {
        BitVec mu(mu_bits_);
        mu.set(params_.header == HeaderMode::Basis ? sender_rank(node) : node, true);
        return mu;
    }

    std::size_t sender_rank(std::size_t node) const {
        auto it = std::lower_bound(sender_ids_.begin(), sender_ids_.end(), node);
        if (it == sender_ids_.end() || *it != node) {
            throw std::invalid_argument("rlnc: node is not a ranked sender");
        }
        return static_cast<std::size_t>(it - sender_ids_.begin());
    }

    // Coefficient vector of a received packet, as a mu_bits_-wide vector.
    std::optional<BitVec> extract_mu(const BitVec& wire) const {
        switch (params_.header) {
            case HeaderMode::Plain:
                return wire.slice(0, header_bits_);
            case HeaderMode::Basis:
                return wire.slice(0, header_bits_);
            case HeaderMode::Coded: {
                auto support = params_.code->decode_sum(
                    wire.slice(0, params_.code->codeword_bits()), params_.a);
                if (!support) {
                    return std::nullopt;
                }
                BitVec mu(mu_bits_);
                for (std::size_t i : *support) {
                    mu.set(i, true);
                }
                return mu;
            }
        }
        return std::nullopt;
    }

    // Valid packet: payload equals the XOR of the messages its coefficient
    // vector names. Preserved by every channel XOR and recombination.
    bool packet_valid(const BitVec& mu, const BitVec& wire) const {
        BitVec expect(params_.ell);
        for (std::size_t i = 0; i < mu_bits_; ++i) {
            if (!mu.get(i)) {
                continue;
            }
            const std::size_t node =
                params_.header == HeaderMode::Basis ? sender_ids_[i] : i;
            auto it = payload_of_.find(node);
            if (it == payload_of_.end()) {
                return false;  // coefficient names a non-sender
            }
            expect ^= it->second;
        }
        return expect == wire.slice(header_bits_, params_.ell);
    }

    void note_rank(std::size_t node, std::size_t round) {
        if (decode_round_[node] == RlncResult::npos &&
            basis_[node].rank() == sender_ids_.size()) {
            decode_round_[node] = round;
        }
    }

    const RlncParams& params_;
    std::size_t header_bits_;
    std::size_t mu_bits_;
    std::size_t packet_bits_;
    std::vector<std::size_t> sender_ids_;
    std::map<std::size_t, BitVec> payload_of_;
    std::vector<std::vector<BitVec>> packets_;
    std::size_t round_ = 0;
};

}  // namespace detail

/// Random linear network coding broadcast on the additive channel. Runs the
/// fixed round budget and reports, per node, the first round at which its
/// received coefficient vectors spanned every source message.
inline RlncResult run_rlnc(air::TopologyProvider& provider, const RlncParams& params,
                           const std::vector<Sender>& senders, std::uint64_t seed,
                           air::Transcript* transcript = nullptr) {
    if (params.id_space < params.n) {
        throw std::invalid_argument("rlnc: id_space must be >= n");
    }
    std::size_t header_bits = params.header_field_bits;
    std::size_t mu_bits = 0;
    switch (params.header) {
        case HeaderMode::Plain:
            if (header_bits == 0) {
                header_bits = params.id_space;
            }
            mu_bits = params.id_space;
            break;
        case HeaderMode::Coded: {
            if (params.code == nullptr) {
                throw std::invalid_argument("rlnc: coded header requires a code");
            }
            if (header_bits == 0) {
                header_bits = params.a * ceil_log2(params.id_space);
            }
            if (params.code->codeword_bits() > header_bits) {
                throw std::invalid_argument(
                    "rlnc: codeword does not fit the header field; use a shorter "
                    "construction or widen header_field_bits");
            }
            mu_bits = params.id_space;
            break;
        }
        case HeaderMode::Basis:
            if (header_bits == 0) {
                header_bits = senders.size();
            }
            mu_bits = senders.size();
            break;
    }

    detail::RlncProtocol protocol(params, senders, header_bits, mu_bits);

    air::RunOptions options;
    options.mode = air::RadioMode::HalfDuplex;
    options.master_seed = seed;
    options.max_rounds = params.rounds;
    options.require_connected = params.require_connected;
    options.transcript = transcript;

    RlncResult result;
    result.metrics = air::run_rounds(provider, protocol, options);
    result.decode_round = std::move(protocol.decode_round_);
    result.packet_bits = header_bits + params.ell;
    result.header_bits = header_bits;
    result.violation = protocol.violation_;
    result.final_rank.reserve(params.n);
    result.metrics.success.assign(params.n, false);
    bool all = true;
    for (std::size_t u = 0; u < params.n; ++u) {
        result.final_rank.push_back(protocol.basis_[u].rank());
        const bool ok = result.decode_round[u] != RlncResult::npos;
        result.metrics.success[u] = ok;
        all = all && ok;
    }
    result.all_success = all;
    return result;
}

/// RLNC with BCC-coded coefficient headers: identical dynamics to run_rlnc
/// under the same seed, with packets of a*ceil(log2 N) + ell bits instead of
/// N + ell.
inline RlncResult run_rlnc_bcc(air::TopologyProvider& provider, RlncParams params,
                               const codes::BccCode& code,
                               const std::vector<Sender>& senders, std::uint64_t seed,
                               air::Transcript* transcript = nullptr) {
    params.header = HeaderMode::Coded;
    params.code = &code;
    return run_rlnc(provider, params, senders, seed, transcript);
}

/// Standard-basis RLNC over an agreed sender set, for use once contention
/// estimation has identified the senders everywhere: senders ranked by
/// increasing ID, header of exactly a' bits.
/// `agreed_senders` must be the set shared by all nodes; a disagreeing
/// estimation outcome must be rejected by the caller before this runs.
inline RlncResult run_rlnc_after_estimation(air::TopologyProvider& provider,
                                            RlncParams params,
                                            const std::vector<Sender>& senders,
                                            std::uint64_t seed,
                                            air::Transcript* transcript = nullptr) {
    params.header = HeaderMode::Basis;
    params.code = nullptr;
    return run_rlnc(provider, params, senders, seed, transcript);
}

}  // namespace bcc::proto
