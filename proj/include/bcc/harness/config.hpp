#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bcc/code.hpp"

namespace bcc::harness {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TopologySpec {
    std::string kind;       // complete | path | grid | random_connected | file | adversary
    std::size_t width = 0;  // grid
    std::size_t height = 0; // grid
    double p = 0.0;         // random_connected
    std::string path;       // file
    std::string adversary;  // spanning_tree_reshuffle | rotating_path | static
};

struct SenderSpec {
    std::string kind;              // explicit | random
    std::vector<std::size_t> ids;  // explicit
    std::size_t count = 0;         // random
};

struct Constants {
    std::size_t c1 = 16;
    std::size_t round_multiplier = 32;
    std::size_t prefix_bits = 16;
};

struct ExperimentConfig {
    std::string protocol;  // local_full | local_half | local_multihop | rlnc |
                           // rlnc_bcc | estimation | rlnc_after_estimation
    std::size_t n = 0;
    std::size_t id_space = 0;  // N
    std::size_t a = 0;
    std::size_t ell = 0;
    TopologySpec topology;
    SenderSpec senders;
    std::vector<std::size_t> payload_lengths;  // optional, per sender in ID order
    std::size_t seed_count = 1;
    std::uint64_t master_seed = 0;
    Constants constants;
    std::optional<codes::Construction> construction;  // protocol default if unset
    std::size_t dbound = 0;  // estimation; 0 -> n - 1
    std::string out;
    std::string transcript_out;
};

namespace detail {

template <typename T>
T require(const nlohmann::json& j, const std::string& field) {
    if (!j.contains(field)) {
        throw ConfigError("missing required field: " + field);
    }
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("malformed field: " + field);
    }
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& field, T fallback) {
    if (!j.contains(field)) {
        return fallback;
    }
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("malformed field: " + field);
    }
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using detail::get_or;
    using detail::require;

    ExperimentConfig c;
    c.protocol = require<std::string>(j, "protocol");

    const nlohmann::json& topo = j.contains("topology") ? j.at("topology") : nlohmann::json::object();
    if (!j.contains("topology")) {
        throw ConfigError("missing required field: topology");
    }
    c.topology.kind = require<std::string>(topo, "kind");
    if (c.topology.kind == "grid") {
        c.topology.width = require<std::size_t>(topo, "width");
        c.topology.height = require<std::size_t>(topo, "height");
        c.n = c.topology.width * c.topology.height;
    } else if (c.topology.kind == "random_connected") {
        c.topology.p = require<double>(topo, "p");
        c.n = require<std::size_t>(j, "n");
    } else if (c.topology.kind == "file") {
        c.topology.path = require<std::string>(topo, "path");
        c.n = require<std::size_t>(j, "n");
    } else if (c.topology.kind == "adversary") {
        c.topology.adversary = require<std::string>(topo, "adversary");
        c.n = require<std::size_t>(j, "n");
    } else if (c.topology.kind == "complete" || c.topology.kind == "path") {
        c.n = require<std::size_t>(j, "n");
    } else {
        throw ConfigError("malformed field: topology.kind");
    }
    if (c.n == 0) {
        throw ConfigError("malformed field: n (must be positive)");
    }

    c.id_space = get_or<std::size_t>(j, "N", c.n);
    if (c.id_space < c.n) {
        throw ConfigError("malformed field: N (must be >= n)");
    }
    c.a = get_or<std::size_t>(j, "a", 0);
    c.ell = get_or<std::size_t>(j, "ell", 0);

    const nlohmann::json& senders = j.contains("senders") ? j.at("senders") : nlohmann::json::object();
    if (!j.contains("senders")) {
        throw ConfigError("missing required field: senders");
    }
    c.senders.kind = require<std::string>(senders, "kind");
    if (c.senders.kind == "explicit") {
        c.senders.ids = require<std::vector<std::size_t>>(senders, "ids");
        for (std::size_t id : c.senders.ids) {
            if (id >= c.n) {
                throw ConfigError("malformed field: senders.ids (node out of range)");
            }
        }
    } else if (c.senders.kind == "random") {
        c.senders.count = require<std::size_t>(senders, "count");
        if (c.senders.count > c.n) {
            throw ConfigError("malformed field: senders.count (exceeds n)");
        }
    } else {
        throw ConfigError("malformed field: senders.kind");
    }

    if (j.contains("payload_lengths")) {
        c.payload_lengths = require<std::vector<std::size_t>>(j, "payload_lengths");
    }

    const nlohmann::json& seeds = j.contains("seeds") ? j.at("seeds") : nlohmann::json::object();
    if (!j.contains("seeds")) {
        throw ConfigError("missing required field: seeds");
    }
    c.seed_count = require<std::size_t>(seeds, "count");
    c.master_seed = require<std::uint64_t>(seeds, "master");

    if (j.contains("constants")) {
        const nlohmann::json& k = j.at("constants");
        c.constants.c1 = get_or<std::size_t>(k, "c1", c.constants.c1);
        c.constants.round_multiplier =
            get_or<std::size_t>(k, "round_multiplier", c.constants.round_multiplier);
        c.constants.prefix_bits = get_or<std::size_t>(k, "prefix_bits", c.constants.prefix_bits);
    }

    if (j.contains("construction")) {
        c.construction =
            codes::construction_from_string(require<std::string>(j, "construction"));
    }

    c.dbound = get_or<std::size_t>(j, "dbound", 0);
    c.out = get_or<std::string>(j, "out", "");
    c.transcript_out = get_or<std::string>(j, "transcript", "");

    // Protocol-specific requirements.
    const bool needs_a = c.protocol == "local_full" || c.protocol == "local_half" ||
                         c.protocol == "local_multihop" || c.protocol == "rlnc" ||
                         c.protocol == "rlnc_bcc";
    if (needs_a && c.a == 0) {
        throw ConfigError("missing required field: a");
    }
    const bool needs_ell = needs_a || c.protocol == "rlnc_after_estimation";
    if (needs_ell && c.ell == 0 && c.payload_lengths.empty()) {
        throw ConfigError("missing required field: ell");
    }
    if (c.protocol != "local_full" && c.protocol != "local_half" &&
        c.protocol != "local_multihop" && c.protocol != "rlnc" &&
        c.protocol != "rlnc_bcc" && c.protocol != "estimation" &&
        c.protocol != "rlnc_after_estimation") {
        throw ConfigError("malformed field: protocol");
    }
    return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace bcc::harness
