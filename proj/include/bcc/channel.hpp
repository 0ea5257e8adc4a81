#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcc/bitvec.hpp"
#include "bcc/topology.hpp"

namespace bcc::air {

enum class RadioMode { FullDuplex, HalfDuplex };

/// One node's action for a single slot.
struct SlotIntent {
    enum class Kind { Transmit, Listen, Idle };

    Kind kind = Kind::Listen;
    BitVec data;

    static SlotIntent transmit(BitVec bits) { return {Kind::Transmit, std::move(bits)}; }
    static SlotIntent listen() { return {Kind::Listen, {}}; }
    static SlotIntent idle() { return {Kind::Idle, {}}; }
};

/// Result of one slot: per node, the received string or no reception.
struct SlotOutcome {
    std::size_t width = 0;
    std::vector<std::optional<BitVec>> received;
};

/// Additive channel semantics: a receiving-eligible node u gets the bitwise
/// XOR over its transmitting neighbors, or the all-zero string when no
/// neighbor transmits (silence is indistinguishable from all zeros).
/// Full-duplex transmitters also receive (their own signal is not included,
/// as u is not in N(u)); half-duplex transmitters get no reception.
/// All transmissions in a slot must share one length; `silent_width` is the
/// allocated slot length used when nobody transmits.
inline SlotOutcome deliver(const Topology& topo, RadioMode mode,
                           std::span<const SlotIntent> intents,
                           std::size_t silent_width) {
    const std::size_t n = topo.n();
    if (intents.size() != n) {
        throw std::invalid_argument("deliver: intent count != node count");
    }
    std::size_t width = silent_width;
    bool have_tx = false;
    for (const SlotIntent& in : intents) {
        if (in.kind == SlotIntent::Kind::Transmit) {
            if (have_tx && in.data.size() != width) {
                throw std::invalid_argument("deliver: mixed slot lengths");
            }
            width = in.data.size();
            have_tx = true;
        }
    }
    SlotOutcome out;
    out.width = width;
    out.received.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        const bool eligible = mode == RadioMode::FullDuplex
                                  ? intents[u].kind != SlotIntent::Kind::Idle
                                  : intents[u].kind == SlotIntent::Kind::Listen;
        if (!eligible) {
            continue;
        }
        BitVec rx(width);
        for (std::size_t v : topo.neighbors(u)) {
            if (intents[v].kind == SlotIntent::Kind::Transmit) {
                rx ^= intents[v].data;
            }
        }
        out.received[u] = std::move(rx);
    }
    return out;
}

}  // namespace bcc::air
