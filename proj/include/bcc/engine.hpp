#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bcc/channel.hpp"
#include "bcc/rng.hpp"
#include "bcc/topology.hpp"

namespace bcc::air {

/// Raised when a run violates a model requirement (e.g. an adversary emits a
/// disconnected graph in a run that requires per-round connectivity).
struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One transmission or reception, for transcripts and adversary observation.
struct TranscriptEvent {
    std::size_t round;
    std::size_t slot;
    std::size_t node;
    bool tx;
    BitVec bits;
};

struct Transcript {
    std::vector<TranscriptEvent> events;

    /// Line format: "round r node u TX|RX bits=<binary>".
    void write(std::ostream& os) const {
        for (const TranscriptEvent& e : events) {
            os << "round " << e.round << " node " << e.node << ' '
               << (e.tx ? "TX" : "RX") << " bits=" << e.bits.to_string() << '\n';
        }
    }
};

/// Per-round graph source.
class TopologyProvider {
public:
    virtual ~TopologyProvider() = default;
    virtual Topology topology(std::size_t round, const Transcript& history) = 0;
};

class StaticProvider : public TopologyProvider {
public:
    explicit StaticProvider(Topology t) : topo_(std::move(t)) {}
    Topology topology(std::size_t, const Transcript&) override { return topo_; }

private:
    Topology topo_;
};

/// Fixed per-round schedule; the last entry repeats once the script runs out.
class ScriptedProvider : public TopologyProvider {
public:
    explicit ScriptedProvider(std::vector<Topology> script) : script_(std::move(script)) {
        if (script_.empty()) {
            throw std::invalid_argument("ScriptedProvider: empty script");
        }
    }
    Topology topology(std::size_t round, const Transcript&) override {
        return script_[round < script_.size() ? round : script_.size() - 1];
    }

private:
    std::vector<Topology> script_;
};

/// Adversary callback: sees the round number and the full observable history,
/// never future randomness.
class AdversaryProvider : public TopologyProvider {
public:
    using Callback = std::function<Topology(std::size_t, const Transcript&)>;
    explicit AdversaryProvider(Callback cb) : cb_(std::move(cb)) {}
    Topology topology(std::size_t round, const Transcript& history) override {
        return cb_(round, history);
    }

private:
    Callback cb_;
};

/// Synchronous protocol driven by the round engine. A round consists of one
/// or more sub-slots of declared fallback widths (used for bit accounting
/// when nobody transmits). Node callbacks must depend only on the node's own
/// state, its reception, and its private rng stream, so that invocation
/// order never changes outcomes.
class RoundProtocol {
public:
    virtual ~RoundProtocol() = default;
    virtual std::size_t node_count() const = 0;
    virtual bool finished() const = 0;
    virtual std::vector<std::size_t> round_widths() = 0;
    virtual SlotIntent intent(std::size_t slot, std::size_t node, Rng& rng) = 0;
    virtual void receive(std::size_t slot, std::size_t node,
                         const std::optional<BitVec>& rx, Rng& rng) = 0;
    virtual void end_round(std::size_t round) { (void)round; }
};

struct PhaseStat {
    std::string label;
    std::size_t rounds = 0;
    std::uint64_t bits = 0;
};

struct RunMetrics {
    std::size_t rounds_elapsed = 0;
    std::uint64_t channel_bits = 0;
    std::vector<std::uint64_t> node_tx_bits;
    std::vector<bool> success;
    std::vector<PhaseStat> phases;
};

struct RunOptions {
    RadioMode mode = RadioMode::HalfDuplex;
    std::uint64_t master_seed = 0;
    std::size_t max_rounds = 1 << 20;
    bool require_connected = false;
    Transcript* transcript = nullptr;   // optional TX/RX log
    bool adversary_history = false;     // record history for the provider
};

/// Executes rounds until the protocol reports completion or max_rounds is
/// reached: fetch topology, collect intents, deliver, distribute results,
/// accumulate metrics. The per-(node, round, slot) rng stream is derived
/// from the master seed, fed first to intent() and then to receive().
inline RunMetrics run_rounds(TopologyProvider& provider, RoundProtocol& protocol,
                             const RunOptions& options) {
    const std::size_t n = protocol.node_count();
    RunMetrics metrics;
    metrics.node_tx_bits.assign(n, 0);
    Transcript history;
    for (std::size_t round = 0; !protocol.finished() && round < options.max_rounds;
         ++round) {
        Topology topo = provider.topology(round, history);
        if (topo.n() != n) {
            throw RunError("run_rounds: topology node count mismatch");
        }
        if (options.require_connected && !is_connected(topo)) {
            throw RunError("run_rounds: disconnected graph at round " + std::to_string(round));
        }
        const std::vector<std::size_t> widths = protocol.round_widths();
        for (std::size_t slot = 0; slot < widths.size(); ++slot) {
            std::vector<Rng> rngs;
            rngs.reserve(n);
            std::vector<SlotIntent> intents;
            intents.reserve(n);
            for (std::size_t u = 0; u < n; ++u) {
                rngs.emplace_back(mix_seed({options.master_seed, u, round, slot}));
                intents.push_back(protocol.intent(slot, u, rngs[u]));
            }
            SlotOutcome outcome = deliver(topo, options.mode, intents, widths[slot]);
            metrics.channel_bits += outcome.width;
            for (std::size_t u = 0; u < n; ++u) {
                if (intents[u].kind == SlotIntent::Kind::Transmit) {
                    metrics.node_tx_bits[u] += outcome.width;
                    if (options.transcript) {
                        options.transcript->events.push_back(
                            {round, slot, u, true, intents[u].data});
                    }
                    if (options.adversary_history) {
                        history.events.push_back({round, slot, u, true, intents[u].data});
                    }
                }
            }
            for (std::size_t u = 0; u < n; ++u) {
                protocol.receive(slot, u, outcome.received[u], rngs[u]);
                if (outcome.received[u] && options.transcript) {
                    options.transcript->events.push_back(
                        {round, slot, u, false, *outcome.received[u]});
                }
            }
        }
        protocol.end_round(round);
        ++metrics.rounds_elapsed;
    }
    return metrics;
}

}  // namespace bcc::air
