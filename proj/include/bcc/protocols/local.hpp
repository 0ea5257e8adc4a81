#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcc/code.hpp"
#include "bcc/engine.hpp"
#include "bcc/util.hpp"

namespace bcc::proto {

/// A broadcasting node and the data it wants everyone in range to receive.
struct Sender {
    std::size_t node;
    BitVec payload;
};

struct LocalBroadcastResult {
    air::RunMetrics metrics;
    std::vector<std::vector<std::size_t>> known_senders;     // per node
    std::vector<std::map<std::size_t, BitVec>> learned;      // per node: id -> payload
    std::size_t codeword_bits = 0;
    bool decode_violation = false;
    bool all_success = false;
};

namespace detail {

inline std::vector<std::size_t> sorted_sender_ids(const std::vector<Sender>& senders) {
    std::vector<std::size_t> ids;
    ids.reserve(senders.size());
    for (const Sender& s : senders) {
        ids.push_back(s.node);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw std::invalid_argument("senders: duplicate node");
    }
    return ids;
}

inline BitVec frame_payload(const BitVec& payload, std::size_t prefix_bits,
                            std::size_t frame_bits) {
    if (payload.size() >= (std::size_t{1} << prefix_bits)) {
        throw std::invalid_argument("payload too long for length prefix");
    }
    if (prefix_bits + payload.size() > frame_bits) {
        throw std::invalid_argument("payload does not fit frame");
    }
    BitVec frame(frame_bits);
    const BitVec prefix = BitVec::from_uint(payload.size(), prefix_bits);
    for (std::size_t i = 0; i < prefix_bits; ++i) {
        if (prefix.get(i)) {
            frame.set(i, true);
        }
    }
    for (std::size_t i = 0; i < payload.size(); ++i) {
        if (payload.get(i)) {
            frame.set(prefix_bits + i, true);
        }
    }
    return frame;
}

inline std::optional<BitVec> parse_frame(const BitVec& frame, std::size_t prefix_bits) {
    if (frame.size() < prefix_bits) {
        return std::nullopt;
    }
    const std::uint64_t len = frame.slice(0, prefix_bits).to_uint();
    if (prefix_bits + len > frame.size()) {
        return std::nullopt;
    }
    return frame.slice(prefix_bits, static_cast<std::size_t>(len));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Single-hop, full-duplex (deterministic).
//
// Slot 0: all senders transmit their codeword from an [N, m, a] code over the
// ID space; everyone (including transmitters, who do not hear themselves)
// decodes the XOR and learns the sender set. Then the senders transmit their
// payloads alone, one slot each in increasing-ID order, each framed with a
// fixed-width length prefix so payload lengths may vary. Slots used: 1 + a'.
// ---------------------------------------------------------------------------

struct LocalFullParams {
    std::size_t n = 0;
    std::size_t id_space = 0;  // N >= n; node index serves as ID
    std::size_t a = 0;
    codes::Construction construction = codes::Construction::Greedy;
    std::size_t prefix_bits = 16;
    codes::BuildLimits limits{};
};

namespace detail {

class LocalFullProtocol : public air::RoundProtocol {
public:
    LocalFullProtocol(const LocalFullParams& params, const codes::BccCode& code,
                      const std::vector<Sender>& senders)
        : params_(params), code_(code), order_(sorted_sender_ids(senders)) {
        known_.resize(params.n);
        learned_.resize(params.n);
        is_sender_.assign(params.n, false);
        for (const Sender& s : senders) {
            is_sender_[s.node] = true;
            payload_of_[s.node] = s.payload;
            learned_[s.node][s.node] = s.payload;
        }
    }

    std::size_t node_count() const override { return params_.n; }

    bool finished() const override { return round_ >= 1 + order_.size(); }

    std::vector<std::size_t> round_widths() override {
        if (round_ == 0) {
            return {code_.codeword_bits()};
        }
        const std::size_t ell = payload_of_.at(order_[round_ - 1]).size();
        return {params_.prefix_bits + ell};
    }

    air::SlotIntent intent(std::size_t, std::size_t node, Rng&) override {
        if (round_ == 0) {
            if (is_sender_[node]) {
                return air::SlotIntent::transmit(code_.encode(node));
            }
            return air::SlotIntent::listen();
        }
        const std::size_t pos = round_ - 1;
        if (is_sender_[node] && pos < known_[node].size() && known_[node][pos] == node) {
            const BitVec& payload = payload_of_.at(node);
            return air::SlotIntent::transmit(detail::frame_payload(
                payload, params_.prefix_bits, params_.prefix_bits + payload.size()));
        }
        return air::SlotIntent::listen();
    }

    void receive(std::size_t, std::size_t node, const std::optional<BitVec>& rx,
                 Rng&) override {
        if (!rx) {
            return;
        }
        if (round_ == 0) {
            auto decoded = code_.decode_sum(*rx, params_.a);
            std::set<std::size_t> ids;
            if (decoded) {
                ids.insert(decoded->begin(), decoded->end());
            } else {
                violation_ = true;  // possible only when a' > a
            }
            if (is_sender_[node]) {
                ids.insert(node);
            }
            known_[node].assign(ids.begin(), ids.end());
            return;
        }
        if (!rx->any()) {
            return;
        }
        auto payload = detail::parse_frame(*rx, params_.prefix_bits);
        if (!payload) {
            violation_ = true;
            return;
        }
        const std::size_t pos = round_ - 1;
        if (pos < known_[node].size()) {
            learned_[node][known_[node][pos]] = std::move(*payload);
        }
    }

    void end_round(std::size_t) override { ++round_; }

    std::vector<std::vector<std::size_t>> known_;
    std::vector<std::map<std::size_t, BitVec>> learned_;
    bool violation_ = false;

private:
    const LocalFullParams& params_;
    const codes::BccCode& code_;
    std::vector<std::size_t> order_;
    std::vector<bool> is_sender_;
    std::map<std::size_t, BitVec> payload_of_;
    std::size_t round_ = 0;
};

inline void finish_local_result(LocalBroadcastResult& result,
                                const std::vector<Sender>& senders,
                                std::size_t n) {
    const std::vector<std::size_t> truth_ids = sorted_sender_ids(senders);
    std::map<std::size_t, BitVec> truth;
    for (const Sender& s : senders) {
        truth[s.node] = s.payload;
    }
    result.metrics.success.assign(n, false);
    bool all = true;
    for (std::size_t u = 0; u < n; ++u) {
        const bool ok = result.known_senders[u] == truth_ids && result.learned[u] == truth;
        result.metrics.success[u] = ok;
        all = all && ok;
    }
    result.all_success = all;
}

}  // namespace detail

inline LocalBroadcastResult run_local_single_hop_full(const LocalFullParams& params,
                                                      const std::vector<Sender>& senders,
                                                      std::uint64_t seed,
                                                      air::Transcript* transcript = nullptr) {
    if (params.id_space < params.n) {
        throw std::invalid_argument("local broadcast: id_space must be >= n");
    }
    // senders.size() > a is permitted: decoding may silently mis-resolve and
    // callers detect it through the success flags.
    const codes::BccCode code =
        params.construction == codes::Construction::Greedy
            ? codes::BccCode::build_greedy(params.id_space, params.a, params.limits)
            : codes::BccCode::build_powermap(params.id_space, params.a, params.limits);

    air::Topology complete(params.n);
    for (std::size_t u = 0; u < params.n; ++u) {
        for (std::size_t v = u + 1; v < params.n; ++v) {
            complete.add_edge(u, v);
        }
    }
    air::StaticProvider provider(std::move(complete));
    detail::LocalFullProtocol protocol(params, code, senders);

    air::RunOptions options;
    options.mode = air::RadioMode::FullDuplex;
    options.master_seed = seed;
    options.max_rounds = 2 + senders.size();
    options.transcript = transcript;

    LocalBroadcastResult result;
    result.metrics = air::run_rounds(provider, protocol, options);
    result.known_senders = std::move(protocol.known_);
    result.learned = std::move(protocol.learned_);
    result.codeword_bits = code.codeword_bits();
    result.decode_violation = protocol.violation_;
    detail::finish_local_result(result, senders, params.n);
    return result;
}

// ---------------------------------------------------------------------------
// Single-hop, half-duplex (randomized).
//
// Phase 1 (c1 * ceil(log2 n) rounds): each sender independently transmits its
// codeword with probability 1/2 or listens; everyone else listens and unions
// the decoded sender sets. Phase 2: one block of c1 * ceil(log2 n) rounds per
// decoded position; the sender owning the position transmits its framed
// payload with probability 1/2 per round and listeners sample it. Payload
// slots share one allocated width (prefix + max payload length).
// ---------------------------------------------------------------------------

struct LocalHalfParams {
    std::size_t n = 0;
    std::size_t id_space = 0;
    std::size_t a = 0;
    std::size_t c1 = 16;
    codes::Construction construction = codes::Construction::Greedy;
    std::size_t prefix_bits = 16;
    codes::BuildLimits limits{};
};

namespace detail {

class LocalHalfProtocol : public air::RoundProtocol {
public:
    LocalHalfProtocol(const LocalHalfParams& params, const codes::BccCode& code,
                      const std::vector<Sender>& senders)
        : params_(params),
          code_(code),
          order_(sorted_sender_ids(senders)),
          phase_rounds_(params.c1 * ceil_log2(params.n)) {
        known_.resize(params.n);
        learned_.resize(params.n);
        is_sender_.assign(params.n, false);
        std::size_t max_ell = 0;
        for (const Sender& s : senders) {
            is_sender_[s.node] = true;
            payload_of_[s.node] = s.payload;
            learned_[s.node][s.node] = s.payload;
            known_[s.node].push_back(s.node);
            max_ell = std::max(max_ell, s.payload.size());
        }
        frame_bits_ = params.prefix_bits + max_ell;
    }

    std::size_t node_count() const override { return params_.n; }

    bool finished() const override {
        return round_ >= phase_rounds_ * (1 + order_.size());
    }

    std::vector<std::size_t> round_widths() override {
        return {round_ < phase_rounds_ ? code_.codeword_bits() : frame_bits_};
    }

    air::SlotIntent intent(std::size_t, std::size_t node, Rng& rng) override {
        if (round_ < phase_rounds_) {
            if (is_sender_[node] && rng.coin()) {
                return air::SlotIntent::transmit(code_.encode(node));
            }
            return air::SlotIntent::listen();
        }
        const std::size_t pos = round_ / phase_rounds_ - 1;
        if (is_sender_[node] && pos < known_[node].size() && known_[node][pos] == node &&
            rng.coin()) {
            return air::SlotIntent::transmit(detail::frame_payload(
                payload_of_.at(node), params_.prefix_bits, frame_bits_));
        }
        return air::SlotIntent::listen();
    }

    void receive(std::size_t, std::size_t node, const std::optional<BitVec>& rx,
                 Rng&) override {
        if (!rx) {
            return;
        }
        if (round_ < phase_rounds_) {
            auto decoded = code_.decode_sum(*rx, params_.a);
            if (!decoded) {
                violation_ = true;
                return;
            }
            if (decoded->empty()) {
                return;
            }
            std::set<std::size_t> ids(known_[node].begin(), known_[node].end());
            ids.insert(decoded->begin(), decoded->end());
            known_[node].assign(ids.begin(), ids.end());
            return;
        }
        if (!rx->any()) {
            return;
        }
        auto payload = detail::parse_frame(*rx, params_.prefix_bits);
        if (!payload) {
            return;  // collided frames from divergent views; sampled again later
        }
        const std::size_t pos = round_ / phase_rounds_ - 1;
        if (pos < known_[node].size()) {
            learned_[node][known_[node][pos]] = std::move(*payload);
        }
    }

    void end_round(std::size_t) override { ++round_; }

    std::vector<std::vector<std::size_t>> known_;
    std::vector<std::map<std::size_t, BitVec>> learned_;
    bool violation_ = false;

private:
    const LocalHalfParams& params_;
    const codes::BccCode& code_;
    std::vector<std::size_t> order_;
    std::size_t phase_rounds_;
    std::size_t frame_bits_;
    std::vector<bool> is_sender_;
    std::map<std::size_t, BitVec> payload_of_;
    std::size_t round_ = 0;
};

}  // namespace detail

inline LocalBroadcastResult run_local_single_hop_half(const LocalHalfParams& params,
                                                      const std::vector<Sender>& senders,
                                                      std::uint64_t seed,
                                                      air::Transcript* transcript = nullptr) {
    if (params.id_space < params.n) {
        throw std::invalid_argument("local broadcast: id_space must be >= n");
    }
    const codes::BccCode code =
        params.construction == codes::Construction::Greedy
            ? codes::BccCode::build_greedy(params.id_space, params.a, params.limits)
            : codes::BccCode::build_powermap(params.id_space, params.a, params.limits);

    air::Topology complete(params.n);
    for (std::size_t u = 0; u < params.n; ++u) {
        for (std::size_t v = u + 1; v < params.n; ++v) {
            complete.add_edge(u, v);
        }
    }
    air::StaticProvider provider(std::move(complete));
    detail::LocalHalfProtocol protocol(params, code, senders);

    air::RunOptions options;
    options.mode = air::RadioMode::HalfDuplex;
    options.master_seed = seed;
    options.max_rounds = params.c1 * ceil_log2(params.n) * (2 + senders.size());
    options.transcript = transcript;

    LocalBroadcastResult result;
    result.metrics = air::run_rounds(provider, protocol, options);
    result.known_senders = std::move(protocol.known_);
    result.learned = std::move(protocol.learned_);
    result.codeword_bits = code.codeword_bits();
    result.decode_violation = protocol.violation_;
    detail::finish_local_result(result, senders, params.n);
    return result;
}

// ---------------------------------------------------------------------------
// Multi-hop local broadcast (half-duplex).
//
// Data is coded directly: the codebook spans M = 2^(ceil(log2 N) + ell)
// packed (id, payload) indices, so a decoded collision yields the payloads
// themselves with no slot coordination. Requires at most a senders in every
// neighborhood. Runs c1 * ceil(log2 n) rounds; each sender transmits its
// codeword with probability 1/2 per round, everyone else listens.
// ---------------------------------------------------------------------------

struct LocalMultihopParams {
    std::size_t id_space = 0;
    std::size_t a = 0;
    std::size_t ell = 0;
    std::size_t c1 = 16;
    codes::Construction construction = codes::Construction::PowerMap;
    codes::BuildLimits limits{};
};

namespace detail {

class LocalMultihopProtocol : public air::RoundProtocol {
public:
    LocalMultihopProtocol(const LocalMultihopParams& params, const codes::BccCode& code,
                          const codes::IndexSpace& space, std::size_t n,
                          const std::vector<Sender>& senders)
        : params_(params), code_(code), space_(space), n_(n), rounds_(params.c1 * ceil_log2(n)) {
        learned_.resize(n);
        codeword_of_.resize(n);
        is_sender_.assign(n, false);
        for (const Sender& s : senders) {
            is_sender_[s.node] = true;
            learned_[s.node][s.node] = s.payload;
            codeword_of_[s.node] = code_.encode(space_.pack(s.node, s.payload));
        }
    }

    std::size_t node_count() const override { return n_; }
    bool finished() const override { return round_ >= rounds_; }
    std::vector<std::size_t> round_widths() override { return {code_.codeword_bits()}; }

    air::SlotIntent intent(std::size_t, std::size_t node, Rng& rng) override {
        if (is_sender_[node] && rng.coin()) {
            return air::SlotIntent::transmit(codeword_of_[node]);
        }
        return air::SlotIntent::listen();
    }

    void receive(std::size_t, std::size_t node, const std::optional<BitVec>& rx,
                 Rng&) override {
        if (!rx) {
            return;
        }
        auto decoded = code_.decode_sum(*rx, params_.a);
        if (!decoded) {
            violation_ = true;
            return;
        }
        for (std::size_t index : *decoded) {
            auto [id, payload] = space_.unpack(index);
            learned_[node][id] = std::move(payload);
        }
    }

    void end_round(std::size_t) override { ++round_; }

    std::vector<std::map<std::size_t, BitVec>> learned_;
    bool violation_ = false;

private:
    const LocalMultihopParams& params_;
    const codes::BccCode& code_;
    codes::IndexSpace space_;
    std::size_t n_;
    std::size_t rounds_;
    std::vector<BitVec> codeword_of_;
    std::vector<bool> is_sender_;
    std::size_t round_ = 0;
};

}  // namespace detail

inline LocalBroadcastResult run_local_multihop(const air::Topology& topology,
                                               const LocalMultihopParams& params,
                                               const std::vector<Sender>& senders,
                                               std::uint64_t seed,
                                               air::Transcript* transcript = nullptr) {
    const std::size_t n = topology.n();
    if (params.id_space < n) {
        throw std::invalid_argument("local broadcast: id_space must be >= n");
    }
    for (const Sender& s : senders) {
        if (s.payload.size() != params.ell) {
            throw std::invalid_argument("multihop: payload length != ell");
        }
    }
    // Contention precheck: at most a senders in every neighborhood.
    std::vector<bool> is_sender(n, false);
    for (const Sender& s : senders) {
        is_sender[s.node] = true;
    }
    for (std::size_t u = 0; u < n; ++u) {
        std::size_t count = 0;
        for (std::size_t v : topology.neighbors(u)) {
            count += is_sender[v] ? 1 : 0;
        }
        if (count > params.a) {
            throw std::invalid_argument("multihop: neighborhood contention exceeds a");
        }
    }

    const codes::IndexSpace space{ceil_log2(params.id_space), params.ell};
    const codes::BccCode code =
        params.construction == codes::Construction::Greedy
            ? codes::BccCode::build_greedy(space.size(), params.a, params.limits)
            : codes::BccCode::build_powermap(space.size(), params.a, params.limits);

    air::StaticProvider provider(topology);
    detail::LocalMultihopProtocol protocol(params, code, space, n, senders);

    air::RunOptions options;
    options.mode = air::RadioMode::HalfDuplex;
    options.master_seed = seed;
    options.max_rounds = params.c1 * ceil_log2(n) + 1;
    options.transcript = transcript;

    LocalBroadcastResult result;
    result.metrics = air::run_rounds(provider, protocol, options);
    result.learned = std::move(protocol.learned_);
    result.codeword_bits = code.codeword_bits();
    result.decode_violation = protocol.violation_;

    // Success: every node knows the (id, payload) pair of every sender in
    // its neighborhood.
    result.metrics.success.assign(n, false);
    result.known_senders.resize(n);
    bool all = true;
    std::map<std::size_t, const BitVec*> truth;
    for (const Sender& s : senders) {
        truth[s.node] = &s.payload;
    }
    for (std::size_t u = 0; u < n; ++u) {
        bool ok = true;
        for (std::size_t v : topology.neighbors(u)) {
            if (!is_sender[v]) {
                continue;
            }
            auto it = result.learned[u].find(v);
            ok = ok && it != result.learned[u].end() && it->second == *truth[v];
        }
        result.metrics.success[u] = ok;
        all = all && ok;
        for (const auto& [id, payload] : result.learned[u]) {
            result.known_senders[u].push_back(id);
        }
    }
    result.all_success = all;
    return result;
}

}  // namespace bcc::proto
