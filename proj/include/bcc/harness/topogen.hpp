#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bcc/engine.hpp"
#include "bcc/rng.hpp"
#include "bcc/topology.hpp"

namespace bcc::harness {

inline air::Topology make_complete(std::size_t n) {
    air::Topology t(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            t.add_edge(u, v);
        }
    }
    return t;
}

inline air::Topology make_path(std::size_t n) {
    air::Topology t(n);
    for (std::size_t u = 0; u + 1 < n; ++u) {
        t.add_edge(u, u + 1);
    }
    return t;
}

inline air::Topology make_grid(std::size_t width, std::size_t height) {
    air::Topology t(width * height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const std::size_t u = y * width + x;
            if (x + 1 < width) {
                t.add_edge(u, u + 1);
            }
            if (y + 1 < height) {
                t.add_edge(u, u + width);
            }
        }
    }
    return t;
}

/// G(n, p), resampled until connected.
inline air::Topology make_random_connected(std::size_t n, double p, Rng& rng,
                                           std::size_t max_tries = 1000) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("make_random_connected: p out of [0, 1]");
    }
    for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
        air::Topology t(n);
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                // 53-bit uniform draw against p.
                const double x = static_cast<double>(rng.bits(53)) /
                                 static_cast<double>(std::uint64_t{1} << 53);
                if (x < p) {
                    t.add_edge(u, v);
                }
            }
        }
        if (air::is_connected(t)) {
            return t;
        }
    }
    throw std::runtime_error("make_random_connected: no connected sample within retry limit");
}

/// Worst-case-style adversary: a fresh uniform-ordered random tree every
/// round. Always connected.
class SpanningTreeReshuffler : public air::TopologyProvider {
public:
    SpanningTreeReshuffler(std::size_t n, std::uint64_t seed) : n_(n), rng_(seed) {}

    air::Topology topology(std::size_t, const air::Transcript&) override {
        std::vector<std::size_t> perm(n_);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n_; i > 1; --i) {
            std::swap(perm[i - 1], perm[rng_.below(i)]);
        }
        air::Topology t(n_);
        for (std::size_t i = 1; i < n_; ++i) {
            t.add_edge(perm[i], perm[rng_.below(i)]);
        }
        return t;
    }

private:
    std::size_t n_;
    Rng rng_;
};

/// Deterministic adversary: a Hamiltonian path whose node order rotates by
/// one position each round.
class RotatingPathProvider : public air::TopologyProvider {
public:
    explicit RotatingPathProvider(std::size_t n) : n_(n) {}

    air::Topology topology(std::size_t round, const air::Transcript&) override {
        air::Topology t(n_);
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            t.add_edge((i + round) % n_, (i + 1 + round) % n_);
        }
        return t;
    }

private:
    std::size_t n_;
};

}  // namespace bcc::harness
