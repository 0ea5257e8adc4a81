#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bcc/code.hpp"
#include "bcc/engine.hpp"
#include "bcc/util.hpp"

namespace bcc::proto {

/// Contention estimation by doubling. Each iteration doubles the estimate k
/// (so the first executed iteration uses k = 4), rebuilds an [N, m, 2k] code,
/// resets the per-node state, and runs round_multiplier * (Dbound + log n)
/// rounds. A round has two sub-slots:
///   fail slot  — failed nodes transmit log n random bits; everyone else
///                listens and fails on any non-zero reception;
///   data slot  — with probability 1/2 transmit the XOR of a fair-coin
///                subset of the known sender codewords, otherwise listen and
///                decode with bound k (union the support on success, fail on
///                an undecodable reception).
/// A node exits on its own local condition (no fail and |S_u| <= k) at the
/// end of an iteration; exited nodes go silent. Nodes exiting at different
/// iterations are reported as divergent.
struct EstimationParams {
    std::size_t n = 0;
    std::size_t id_space = 0;  // N
    std::size_t dbound = 0;    // upper bound on the diameter, config input
    std::size_t round_multiplier = 32;
    std::size_t fail_slot_bits = 0;  // 0 -> ceil(log2 n)
    std::size_t k_cap = 0;           // 0 -> first power of two >= 2n
    codes::Construction construction = codes::Construction::PowerMap;
    codes::BuildLimits limits{};
};

struct EstimationResult {
    air::RunMetrics metrics;
    std::vector<codes::SupportSet> sets;      // final S_u per node
    std::vector<std::size_t> exit_k;          // 0 when the node never exited
    std::vector<std::size_t> exit_iteration;  // npos when the node never exited
    std::size_t iterations = 0;
    std::size_t final_k = 0;
    bool completed = false;  // all nodes exited
    bool divergent = false;  // exit iterations differ
    bool all_success = false;

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

namespace detail {

class EstimationProtocol : public air::RoundProtocol {
public:
    EstimationProtocol(const EstimationParams& params,
                       const std::vector<std::size_t>& senders)
        : params_(params),
          fail_bits_(params.fail_slot_bits ? params.fail_slot_bits : ceil_log2(params.n)),
          iteration_rounds_(params.round_multiplier * (params.dbound + ceil_log2(params.n))),
          k_cap_(params.k_cap ? params.k_cap
                              : std::size_t{1} << ceil_log2(2 * params.n)) {
        is_sender_.assign(params.n, false);
        for (std::size_t s : senders) {
            if (s >= params.n) {
                throw std::invalid_argument("estimation: sender out of range");
            }
            is_sender_[s] = true;
        }
        active_.assign(params.n, true);
        fail_.assign(params.n, false);
        sets_.resize(params.n);
        exit_k_.assign(params.n, 0);
        exit_iteration_.assign(params.n, EstimationResult::npos);
        start_iteration();
    }

    std::size_t node_count() const override { return params_.n; }
    bool finished() const override { return done_; }

    std::vector<std::size_t> round_widths() override {
        return {fail_bits_, code_->codeword_bits()};
    }

    air::SlotIntent intent(std::size_t slot, std::size_t node, Rng& rng) override {
        if (!active_[node]) {
            return air::SlotIntent::idle();
        }
        if (slot == 0) {
            if (fail_[node]) {
                return air::SlotIntent::transmit(rng.bitvec(fail_bits_));
            }
            return air::SlotIntent::listen();
        }
        if (rng.coin()) {
            // XOR of the known sender codewords, each kept with a fair coin.
            BitVec sum(code_->codeword_bits());
            for (std::size_t v : sets_[node]) {
                if (rng.coin()) {
                    sum ^= code_->encode(v);
                }
            }
            return air::SlotIntent::transmit(std::move(sum));
        }
        return air::SlotIntent::listen();
    }

    void receive(std::size_t slot, std::size_t node, const std::optional<BitVec>& rx,
                 Rng&) override {
        if (!active_[node] || !rx) {
            return;
        }
        if (slot == 0) {
            if (!fail_[node] && rx->any()) {
                fail_[node] = true;
            }
            return;
        }
        auto decoded = code_->decode_sum(*rx, k_);
        if (!decoded) {
            fail_[node] = true;
            return;
        }
        sets_[node].insert(decoded->begin(), decoded->end());
    }

    void end_round(std::size_t) override {
        if (++round_in_iteration_ < iteration_rounds_) {
            return;
        }
        bool any_active = false;
        for (std::size_t u = 0; u < params_.n; ++u) {
            if (!active_[u]) {
                continue;
            }
            if (!fail_[u] && sets_[u].size() <= k_) {
                active_[u] = false;
                exit_k_[u] = k_;
                exit_iteration_[u] = iteration_;
            } else {
                any_active = true;
            }
        }
        ++iteration_;
        if (!any_active) {
            done_ = true;
            completed_ = true;
            return;
        }
        if (k_ >= k_cap_) {
            done_ = true;  // estimate cap reached with nodes still unsettled
            return;
        }
        start_iteration();
    }

    std::size_t iterations() const { return iteration_; }
    bool completed() const { return completed_; }
    std::size_t iteration_rounds() const { return iteration_rounds_; }
    std::size_t fail_bits() const { return fail_bits_; }
    const std::vector<std::size_t>& iteration_k() const { return iteration_k_; }
    const std::vector<std::size_t>& iteration_m() const { return iteration_m_; }

    std::vector<std::set<std::size_t>> sets_;
    std::vector<std::size_t> exit_k_;
    std::vector<std::size_t> exit_iteration_;

private:
    void start_iteration() {
        k_ *= 2;
        const std::size_t code_a = 2 * k_;
        code_ = std::make_unique<codes::BccCode>(
            params_.construction == codes::Construction::Greedy
                ? codes::BccCode::build_greedy(params_.id_space, code_a, params_.limits)
                : codes::BccCode::build_powermap(params_.id_space, code_a, params_.limits));
        iteration_k_.push_back(k_);
        iteration_m_.push_back(code_->codeword_bits());
        round_in_iteration_ = 0;
        for (std::size_t u = 0; u < params_.n; ++u) {
            if (!active_[u]) {
                continue;
            }
            fail_[u] = false;
            sets_[u].clear();
            if (is_sender_[u]) {
                sets_[u].insert(u);
            }
        }
    }

    const EstimationParams& params_;
    std::size_t fail_bits_;
    std::size_t iteration_rounds_;
    std::size_t k_cap_;
    std::size_t k_ = 2;
    std::unique_ptr<codes::BccCode> code_;
    std::vector<bool> is_sender_;
    std::vector<bool> active_;
    std::vector<bool> fail_;
    std::vector<std::size_t> iteration_k_;
    std::vector<std::size_t> iteration_m_;
    std::size_t round_in_iteration_ = 0;
    std::size_t iteration_ = 0;
    bool done_ = false;
    bool completed_ = false;
};

}  // namespace detail

inline EstimationResult run_estimation(air::TopologyProvider& provider,
                                       const EstimationParams& params,
                                       const std::vector<std::size_t>& senders,
                                       std::uint64_t seed,
                                       air::Transcript* transcript = nullptr) {
    if (params.id_space < params.n) {
        throw std::invalid_argument("estimation: id_space must be >= n");
    }
    detail::EstimationProtocol protocol(params, senders);

    air::RunOptions options;
    options.mode = air::RadioMode::HalfDuplex;
    options.master_seed = seed;
    options.max_rounds = std::numeric_limits<std::size_t>::max();
    options.require_connected = true;
    options.transcript = transcript;

    EstimationResult result;
    result.metrics = air::run_rounds(provider, protocol, options);
    result.exit_k = std::move(protocol.exit_k_);
    result.exit_iteration = std::move(protocol.exit_iteration_);
    result.iterations = protocol.iterations();
    result.completed = protocol.completed();
    result.sets.resize(params.n);
    for (std::size_t u = 0; u < params.n; ++u) {
        result.sets[u].assign(protocol.sets_[u].begin(), protocol.sets_[u].end());
        result.final_k = std::max(result.final_k, result.exit_k[u]);
    }
    for (std::size_t u = 1; u < params.n; ++u) {
        if (result.exit_iteration[u] != result.exit_iteration[0]) {
            result.divergent = true;
        }
    }
    // Per-iteration accounting.
    for (std::size_t i = 0; i < protocol.iteration_k().size(); ++i) {
        air::PhaseStat phase;
        phase.label = "k=" + std::to_string(protocol.iteration_k()[i]);
        phase.rounds = protocol.iteration_rounds();
        phase.bits = static_cast<std::uint64_t>(protocol.iteration_rounds()) *
                     (protocol.fail_bits() + protocol.iteration_m()[i]);
        result.metrics.phases.push_back(std::move(phase));
    }

    codes::SupportSet truth(senders.begin(), senders.end());
    std::sort(truth.begin(), truth.end());
    result.metrics.success.assign(params.n, false);
    bool all = true;
    for (std::size_t u = 0; u < params.n; ++u) {
        const bool ok =
            result.exit_iteration[u] != EstimationResult::npos && result.sets[u] == truth;
        result.metrics.success[u] = ok;
        all = all && ok;
    }
    result.all_success = all && result.completed;
    return result;
}

}  // namespace bcc::proto
