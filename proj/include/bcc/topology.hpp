#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bcc::air {

/// Undirected graph on nodes [0, n): symmetric adjacency, no self-loops.
class Topology {
public:
    Topology() = default;

    explicit Topology(std::size_t n) : adj_(n) {}

    static Topology from_edges(std::size_t n,
                               std::span<const std::pair<std::size_t, std::size_t>> edges) {
        Topology t(n);
        for (auto [u, v] : edges) {
            t.add_edge(u, v);
        }
        return t;
    }

    std::size_t n() const { return adj_.size(); }

    void add_edge(std::size_t u, std::size_t v) {
        if (u >= n() || v >= n()) {
            throw std::out_of_range("Topology::add_edge: node out of range");
        }
        if (u == v) {
            throw std::invalid_argument("Topology::add_edge: self-loop");
        }
        insert_sorted(adj_[u], v);
        insert_sorted(adj_[v], u);
    }

    bool has_edge(std::size_t u, std::size_t v) const {
        const auto& nb = adj_.at(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    std::span<const std::size_t> neighbors(std::size_t u) const { return adj_.at(u); }

    std::size_t edge_count() const {
        std::size_t total = 0;
        for (const auto& nb : adj_) {
            total += nb.size();
        }
        return total / 2;
    }

private:
    static void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x) {
            v.insert(it, x);
        }
    }

    std::vector<std::vector<std::size_t>> adj_;
};

inline std::vector<std::size_t> bfs_distances(const Topology& t, std::size_t source) {
    constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist(t.n(), kUnreached);
    std::deque<std::size_t> queue;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : t.neighbors(u)) {
            if (dist[v] == kUnreached) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

inline bool is_connected(const Topology& t) {
    if (t.n() == 0) {
        return true;
    }
    auto dist = bfs_distances(t, 0);
    return std::none_of(dist.begin(), dist.end(),
                        [](std::size_t d) { return d == static_cast<std::size_t>(-1); });
}

/// Maximum shortest-path distance; throws on a disconnected graph.
inline std::size_t diameter(const Topology& t) {
    if (t.n() == 0) {
        throw std::invalid_argument("diameter: empty graph");
    }
    std::size_t best = 0;
    for (std::size_t s = 0; s < t.n(); ++s) {
        auto dist = bfs_distances(t, s);
        for (std::size_t d : dist) {
            if (d == static_cast<std::size_t>(-1)) {
                throw std::invalid_argument("diameter: graph is disconnected");
            }
            best = std::max(best, d);
        }
    }
    return best;
}

/// Edge-list text format: a header line with the node count, then one
/// "u v" pair per line.
inline void write_topology(std::ostream& os, const Topology& t) {
    os << t.n() << '\n';
    for (std::size_t u = 0; u < t.n(); ++u) {
        for (std::size_t v : t.neighbors(u)) {
            if (u < v) {
                os << u << ' ' << v << '\n';
            }
        }
    }
}

inline Topology read_topology(std::istream& is) {
    std::size_t n = 0;
    if (!(is >> n)) {
        throw std::invalid_argument("read_topology: missing node count header");
    }
    Topology t(n);
    std::size_t u = 0;
    std::size_t v = 0;
    while (is >> u >> v) {
        t.add_edge(u, v);
    }
    return t;
}

/// Scripted dynamic topology: edge-lists separated by "round r" lines.
inline std::vector<Topology> read_scripted_topology(std::istream& is) {
    std::vector<Topology> script;
    std::string line;
    std::vector<std::string> block;
    auto flush = [&]() {
        if (block.empty()) {
            return;
        }
        std::stringstream ss;
        for (const std::string& l : block) {
            ss << l << '\n';
        }
        script.push_back(read_topology(ss));
        block.clear();
    };
    while (std::getline(is, line)) {
        if (line.rfind("round", 0) == 0) {
            flush();
        } else if (!line.empty()) {
            block.push_back(line);
        }
    }
    flush();
    if (script.empty()) {
        throw std::invalid_argument("read_scripted_topology: no rounds found");
    }
    return script;
}

}  // namespace bcc::air
