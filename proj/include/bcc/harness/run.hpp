#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bcc/engine.hpp"
#include "bcc/harness/config.hpp"
#include "bcc/harness/topogen.hpp"
#include "bcc/protocols/estimation.hpp"
#include "bcc/protocols/local.hpp"
#include "bcc/protocols/rlnc.hpp"
#include "bcc/rng.hpp"
#include "bcc/util.hpp"

namespace bcc::harness {

struct MetricsRecord {
    std::uint64_t seed = 0;
    std::string protocol;
    std::size_t n = 0;
    std::size_t id_space = 0;
    std::size_t a = 0;
    std::size_t a_prime = 0;
    std::size_t ell = 0;
    std::size_t rounds = 0;
    std::uint64_t channel_bits = 0;
    bool success = false;
    std::string extra_json;
};

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

inline constexpr const char* kCsvHeader =
    "seed,protocol,n,N,a,a_prime,ell,rounds,channel_bits,success,extra_json";

inline void write_csv(std::ostream& os, const std::vector<MetricsRecord>& records) {
    os << kCsvHeader << '\n';
    for (const MetricsRecord& r : records) {
        os << r.seed << ',' << r.protocol << ',' << r.n << ',' << r.id_space << ','
           << r.a << ',' << r.a_prime << ',' << r.ell << ',' << r.rounds << ','
           << r.channel_bits << ',' << (r.success ? 1 : 0) << ','
           << csv_escape(r.extra_json) << '\n';
    }
}

namespace detail {

// Seed-stream tags so independent draws never share a stream.
inline constexpr std::uint64_t kTagTopology = 0x746f706f;
inline constexpr std::uint64_t kTagAdversary = 0x61647673;
inline constexpr std::uint64_t kTagSenders = 0x736e6472;
inline constexpr std::uint64_t kTagPayload = 0x70617964;

struct Scenario {
    std::unique_ptr<air::TopologyProvider> provider;
    std::optional<air::Topology> static_topology;
    std::vector<std::size_t> sender_ids;  // sorted
    std::vector<proto::Sender> senders;   // payloads in ID order
    std::size_t d_term = 0;               // D for round bounds (n when dynamic)
    bool dynamic = false;
};

inline std::vector<std::size_t> sample_distinct(std::size_t count, std::size_t n,
                                                Rng& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(pool[i], pool[i + rng.below(n - i)]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

inline Scenario build_scenario(const ExperimentConfig& c, std::uint64_t run_seed) {
    Scenario s;
    const TopologySpec& t = c.topology;
    if (t.kind == "complete") {
        s.static_topology = make_complete(c.n);
    } else if (t.kind == "path") {
        s.static_topology = make_path(c.n);
    } else if (t.kind == "grid") {
        s.static_topology = make_grid(t.width, t.height);
    } else if (t.kind == "random_connected") {
        Rng rng(mix_seed({run_seed, kTagTopology}));
        s.static_topology = make_random_connected(c.n, t.p, rng);
    } else if (t.kind == "file") {
        std::ifstream in(t.path);
        if (!in) {
            throw ConfigError("malformed field: topology.path (cannot open " + t.path + ")");
        }
        s.static_topology = air::read_topology(in);
        if (s.static_topology->n() != c.n) {
            throw ConfigError("malformed field: n (does not match topology file)");
        }
    } else if (t.kind == "adversary") {
        s.dynamic = true;
        if (t.adversary == "spanning_tree_reshuffle") {
            s.provider = std::make_unique<SpanningTreeReshuffler>(
                c.n, mix_seed({run_seed, kTagAdversary}));
        } else if (t.adversary == "rotating_path") {
            s.provider = std::make_unique<RotatingPathProvider>(c.n);
        } else if (t.adversary == "static") {
            s.provider = std::make_unique<air::StaticProvider>(make_complete(c.n));
        } else {
            throw ConfigError("malformed field: topology.adversary");
        }
    }
    if (s.static_topology) {
        s.provider = std::make_unique<air::StaticProvider>(*s.static_topology);
        s.d_term = air::is_connected(*s.static_topology) ? air::diameter(*s.static_topology)
                                                         : c.n;
    } else {
        s.d_term = c.n;
    }

    if (c.senders.kind == "explicit") {
        s.sender_ids = c.senders.ids;
        std::sort(s.sender_ids.begin(), s.sender_ids.end());
    } else {
        Rng rng(mix_seed({run_seed, kTagSenders}));
        s.sender_ids = sample_distinct(c.senders.count, c.n, rng);
    }
    if (!c.payload_lengths.empty() && c.payload_lengths.size() != s.sender_ids.size()) {
        throw ConfigError("malformed field: payload_lengths (size != sender count)");
    }
    for (std::size_t i = 0; i < s.sender_ids.size(); ++i) {
        const std::size_t len =
            c.payload_lengths.empty() ? c.ell : c.payload_lengths[i];
        Rng rng(mix_seed({run_seed, kTagPayload, s.sender_ids[i]}));
        s.senders.push_back({s.sender_ids[i], rng.bitvec(len)});
    }
    return s;
}

inline nlohmann::json decode_rounds_json(const proto::RlncResult& r) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t d : r.decode_round) {
        if (d == proto::RlncResult::npos) {
            a.push_back(-1);
        } else {
            a.push_back(static_cast<std::int64_t>(d));
        }
    }
    return a;
}

}  // namespace detail

/// Batch-constant precomputed state (codes are deterministic functions of
/// their parameters, so they are shared across seeds).
struct BatchContext {
    std::optional<codes::BccCode> rlnc_header_code;
};

inline BatchContext make_batch_context(const ExperimentConfig& c) {
    BatchContext ctx;
    if (c.protocol == "rlnc_bcc") {
        const codes::Construction cons =
            c.construction.value_or(codes::Construction::Greedy);
        ctx.rlnc_header_code =
            cons == codes::Construction::Greedy
                ? codes::BccCode::build_greedy(c.id_space, c.a)
                : codes::BccCode::build_powermap(c.id_space, c.a);
    }
    return ctx;
}

inline MetricsRecord run_scenario(const ExperimentConfig& c, const BatchContext& ctx,
                                  std::size_t seed_index,
                                  air::Transcript* transcript = nullptr) {
    const std::uint64_t run_seed = mix_seed({c.master_seed, seed_index});
    MetricsRecord rec;
    rec.seed = run_seed;
    rec.protocol = c.protocol;
    rec.n = c.n;
    rec.id_space = c.id_space;
    rec.a = c.a;
    rec.ell = c.ell;
    nlohmann::json extra;
    try {
        detail::Scenario s = detail::build_scenario(c, run_seed);
        rec.a_prime = s.sender_ids.size();

        if (c.protocol == "local_full") {
            proto::LocalFullParams p;
            p.n = c.n;
            p.id_space = c.id_space;
            p.a = c.a;
            p.construction = c.construction.value_or(codes::Construction::Greedy);
            p.prefix_bits = c.constants.prefix_bits;
            auto r = proto::run_local_single_hop_full(p, s.senders, run_seed, transcript);
            rec.rounds = r.metrics.rounds_elapsed;
            rec.channel_bits = r.metrics.channel_bits;
            rec.success = r.all_success;
            extra["m"] = r.codeword_bits;
            extra["violation"] = r.decode_violation;
        } else if (c.protocol == "local_half") {
            proto::LocalHalfParams p;
            p.n = c.n;
            p.id_space = c.id_space;
            p.a = c.a;
            p.c1 = c.constants.c1;
            p.construction = c.construction.value_or(codes::Construction::Greedy);
            p.prefix_bits = c.constants.prefix_bits;
            auto r = proto::run_local_single_hop_half(p, s.senders, run_seed, transcript);
            rec.rounds = r.metrics.rounds_elapsed;
            rec.channel_bits = r.metrics.channel_bits;
            rec.success = r.all_success;
            extra["m"] = r.codeword_bits;
            extra["violation"] = r.decode_violation;
        } else if (c.protocol == "local_multihop") {
            if (!s.static_topology) {
                throw ConfigError("local_multihop requires a static topology");
            }
            proto::LocalMultihopParams p;
            p.id_space = c.id_space;
            p.a = c.a;
            p.ell = c.ell;
            p.c1 = c.constants.c1;
            p.construction = c.construction.value_or(codes::Construction::PowerMap);
            auto r = proto::run_local_multihop(*s.static_topology, p, s.senders, run_seed,
                                               transcript);
            rec.rounds = r.metrics.rounds_elapsed;
            rec.channel_bits = r.metrics.channel_bits;
            rec.success = r.all_success;
            extra["m"] = r.codeword_bits;
            extra["violation"] = r.decode_violation;
        } else if (c.protocol == "rlnc" || c.protocol == "rlnc_bcc") {
            proto::RlncParams p;
            p.n = c.n;
            p.id_space = c.id_space;
            p.a = c.a;
            p.ell = c.ell;
            p.rounds =
                c.constants.round_multiplier * (s.d_term + c.a + ceil_log2(c.id_space));
            p.require_connected = s.dynamic;
            proto::RlncResult r;
            if (c.protocol == "rlnc_bcc") {
                r = proto::run_rlnc_bcc(*s.provider, p, *ctx.rlnc_header_code, s.senders,
                                        run_seed, transcript);
            } else {
                r = proto::run_rlnc(*s.provider, p, s.senders, run_seed, transcript);
            }
            rec.rounds = r.metrics.rounds_elapsed;
            rec.channel_bits = r.metrics.channel_bits;
            rec.success = r.all_success;
            extra["packet_bits"] = r.packet_bits;
            extra["header_bits"] = r.header_bits;
            extra["d_term"] = s.d_term;
            extra["round_bound"] = p.rounds;
            extra["violation"] = r.violation;
            extra["decode_rounds"] = detail::decode_rounds_json(r);
        } else if (c.protocol == "estimation") {
            proto::EstimationParams p;
            p.n = c.n;
            p.id_space = c.id_space;
            p.dbound = c.dbound ? c.dbound : c.n - 1;
            p.round_multiplier = c.constants.round_multiplier;
            p.construction = c.construction.value_or(codes::Construction::PowerMap);
            auto r = proto::run_estimation(*s.provider, p, s.sender_ids, run_seed,
                                           transcript);
            rec.rounds = r.metrics.rounds_elapsed;
            rec.channel_bits = r.metrics.channel_bits;
            rec.success = r.all_success;
            extra["final_k"] = r.final_k;
            extra["iterations"] = r.iterations;
            extra["completed"] = r.completed;
            extra["divergent"] = r.divergent;
        } else if (c.protocol == "rlnc_after_estimation") {
            proto::EstimationParams ep;
            ep.n = c.n;
            ep.id_space = c.id_space;
            ep.dbound = c.dbound ? c.dbound : c.n - 1;
            ep.round_multiplier = c.constants.round_multiplier;
            ep.construction = c.construction.value_or(codes::Construction::PowerMap);
            auto est = proto::run_estimation(*s.provider, ep, s.sender_ids, run_seed);
            extra["estimation_rounds"] = est.metrics.rounds_elapsed;
            extra["estimation_bits"] = est.metrics.channel_bits;
            extra["final_k"] = est.final_k;
            bool consistent = est.completed && !est.divergent;
            for (std::size_t u = 1; consistent && u < c.n; ++u) {
                consistent = est.sets[u] == est.sets[0];
            }
            if (!consistent || !est.all_success) {
                // Inconsistent or failed estimation: the broadcast stage
                // cannot run; abort this seed with a diagnostic.
                rec.rounds = est.metrics.rounds_elapsed;
                rec.channel_bits = est.metrics.channel_bits;
                rec.success = false;
                extra["error"] = "estimation did not yield a consistent sender set";
            } else {
                // Rebuild the scenario so the RLNC stage sees a fresh
                // provider stream (dynamic adversaries are stateful).
                detail::Scenario s2 = detail::build_scenario(c, run_seed);
                proto::RlncParams p;
                p.n = c.n;
                p.id_space = c.id_space;
                p.a = s.sender_ids.size();
                p.ell = c.ell;
                p.rounds = c.constants.round_multiplier *
                           (s.d_term + s.sender_ids.size() + ceil_log2(c.id_space));
                p.require_connected = s.dynamic;
                auto r = proto::run_rlnc_after_estimation(*s2.provider, p, s.senders,
                                                          run_seed, transcript);
                rec.rounds = est.metrics.rounds_elapsed + r.metrics.rounds_elapsed;
                rec.channel_bits = est.metrics.channel_bits + r.metrics.channel_bits;
                rec.success = r.all_success;
                extra["rlnc_rounds"] = r.metrics.rounds_elapsed;
                extra["rlnc_bits"] = r.metrics.channel_bits;
                extra["round_bound"] = p.rounds;
                extra["packet_bits"] = r.packet_bits;
                extra["decode_rounds"] = detail::decode_rounds_json(r);
            }
        } else {
            throw ConfigError("malformed field: protocol");
        }
    } catch (const std::exception& e) {
        rec.success = false;
        extra["error"] = e.what();
    }
    rec.extra_json = extra.dump();
    return rec;
}

struct BatchSummary {
    std::size_t seeds = 0;
    std::size_t successes = 0;
    std::size_t max_rounds = 0;
    double mean_rounds = 0.0;
};

struct BatchResult {
    std::vector<MetricsRecord> records;
    BatchSummary summary;
};

/// Runs `seed_count` independent simulations; fully determined by the
/// config and master seed. Records are emitted in seed order.
inline BatchResult run_batch(const ExperimentConfig& c) {
    BatchContext ctx = make_batch_context(c);
    BatchResult out;
    out.records.reserve(c.seed_count);
    for (std::size_t i = 0; i < c.seed_count; ++i) {
        out.records.push_back(run_scenario(c, ctx, i));
    }
    out.summary.seeds = c.seed_count;
    std::size_t total_rounds = 0;
    for (const MetricsRecord& r : out.records) {
        out.summary.successes += r.success ? 1 : 0;
        out.summary.max_rounds = std::max(out.summary.max_rounds, r.rounds);
        total_rounds += r.rounds;
    }
    out.summary.mean_rounds =
        c.seed_count ? static_cast<double>(total_rounds) / c.seed_count : 0.0;
    return out;
}

}  // namespace bcc::harness
