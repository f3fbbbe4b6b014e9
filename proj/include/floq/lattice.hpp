#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace floq {

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Undirected qubit-connectivity graph with a proper edge coloring into
// parallel gate layers and 2D layout coordinates for rendering.
//
// Invariants: simple graph, edges stored as (a < b) in lexicographic order,
// edges sharing a site never share a layer. Immutable after construction.
struct LatticeGraph {
    int num_sites = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> layer_of_edge;  // parallel to `edges`
    int num_layers = 0;
    bool layer_overflow = false;  // more than 3 layers were needed
    std::vector<std::pair<double, double>> coords;
    std::vector<std::vector<int>> adjacency;  // site -> sorted neighbor list

    int num_edges() const { return static_cast<int>(edges.size()); }

    int degree(int site) const { return static_cast<int>(adjacency.at(site).size()); }

    int max_degree() const {
        int d = 0;
        for (const auto& nb : adjacency) d = std::max(d, static_cast<int>(nb.size()));
        return d;
    }

    bool connected() const {
        if (num_sites == 0) return true;
        std::vector<char> seen(num_sites, 0);
        std::queue<int> frontier;
        frontier.push(0);
        seen[0] = 1;
        int reached = 1;
        while (!frontier.empty()) {
            const int v = frontier.front();
            frontier.pop();
            for (int w : adjacency[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    frontier.push(w);
                }
            }
        }
        return reached == num_sites;
    }
};

struct Neighborhood {
    int center = 0;
    int radius = 0;
    std::vector<int> members;  // sorted, includes center
};

namespace detail {

// Proper edge coloring: greedy over the canonical edge order, with a
// Kempe-chain repair when both endpoints are saturated. On bipartite
// graphs (every heavy-hex graph is bipartite) the repair always succeeds,
// so max-degree-3 inputs get exactly 3 layers; odd structures fall back
// to opening an extra layer.
inline void color_edges(LatticeGraph& g) {
    const int m = g.num_edges();
    g.layer_of_edge.assign(m, -1);
    std::vector<std::vector<int>> incident(g.num_sites);
    for (int e = 0; e < m; ++e) {
        incident[g.edges[e].first].push_back(e);
        incident[g.edges[e].second].push_back(e);
    }
    int palette = 1;

    auto color_used_at = [&](int site, int color) -> int {
        for (int e : incident[site]) {
            if (g.layer_of_edge[e] == color) return e;
        }
        return -1;
    };
    auto missing_color = [&](int site, int limit) -> int {
        for (int c = 0; c < limit; ++c) {
            if (color_used_at(site, c) < 0) return c;
        }
        return -1;
    };

    for (int e = 0; e < m; ++e) {
        const auto [u, v] = g.edges[e];
        int chosen = -1;
        for (int c = 0; c < palette; ++c) {
            if (color_used_at(u, c) < 0 && color_used_at(v, c) < 0) {
                chosen = c;
                break;
            }
        }
        if (chosen < 0 && palette >= 2) {
            const int a = missing_color(u, palette);
            const int b = missing_color(v, palette);
            if (a >= 0 && b >= 0) {
                // Walk the maximal b/a-alternating path from u. If it does not
                // end at v, swapping colors along it frees `b` at u.
                std::vector<int> path;
                int site = u;
                int want = b;
                bool hit_v = false;
                while (true) {
                    const int edge = color_used_at(site, want);
                    if (edge < 0) break;
                    path.push_back(edge);
                    site = g.edges[edge].first == site ? g.edges[edge].second
                                                       : g.edges[edge].first;
                    if (site == v) {
                        hit_v = true;
                        break;
                    }
                    want = (want == b) ? a : b;
                }
                if (!hit_v) {
                    for (int edge : path) {
                        g.layer_of_edge[edge] = (g.layer_of_edge[edge] == a) ? b : a;
                    }
                    chosen = b;
                }
            }
        }
        if (chosen < 0) {
            chosen = palette;  // open a new layer
        }
        palette = std::max(palette, chosen + 1);
        g.layer_of_edge[e] = chosen;
    }
    g.num_layers = (m == 0) ? 0 : palette;
    g.layer_overflow = g.num_layers > 3;
}

inline void finalize(LatticeGraph& g) {
    for (auto& e : g.edges) {
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.adjacency.assign(g.num_sites, {});
    for (const auto& [a, b] : g.edges) {
        g.adjacency[a].push_back(b);
        g.adjacency[b].push_back(a);
    }
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    color_edges(g);
}

}  // namespace detail

// Core builder used by every generator and loader. Validates the edge set,
// canonicalizes its order, computes the layer coloring and (if absent)
// deterministic circular layout coordinates.
inline LatticeGraph make_graph(int num_sites, std::vector<std::pair<int, int>> edges,
                               std::vector<std::pair<double, double>> coords = {}) {
    if (num_sites <= 0) throw LatticeError("graph must have at least one site");
    std::set<std::pair<int, int>> seen;
    for (auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= num_sites || b >= num_sites) {
            throw LatticeError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                               ") references a site outside [0, " + std::to_string(num_sites) + ")");
        }
        if (a == b) throw LatticeError("self-loop at site " + std::to_string(a));
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) {
            throw LatticeError("duplicate edge (" + std::to_string(a) + ", " +
                               std::to_string(b) + ")");
        }
    }
    LatticeGraph g;
    g.num_sites = num_sites;
    g.edges = std::move(edges);
    if (coords.empty()) {
        g.coords.resize(num_sites);
        for (int s = 0; s < num_sites; ++s) {
            const double angle = 2.0 * 3.14159265358979323846 * s / num_sites;
            g.coords[s] = {std::cos(angle), std::sin(angle)};
        }
    } else {
        if (static_cast<int>(coords.size()) != num_sites) {
            throw LatticeError("coordinate list size does not match num_sites");
        }
        g.coords = std::move(coords);
    }
    detail::finalize(g);
    return g;
}

// Heavy-hex lattice in the row/bridge parametrization used by IBM-style
// devices: `rows` horizontal chains of `cols` qubits; between consecutive
// rows, bridge qubits every 4 columns, with the column offset alternating
// between `first_offset` and `first_offset + 2` from gap to gap.
//
// Canonical indexing interleaves rows and bridge groups top to bottom,
// left to right: row 0, gap-0 bridges, row 1, gap-1 bridges, ...
inline LatticeGraph build_heavy_hex_rows(int rows, int cols, int first_offset = 3) {
    if (rows < 1 || cols < 2) throw LatticeError("heavy-hex generator needs rows >= 1, cols >= 2");
    if (first_offset < 0 || first_offset > 3) throw LatticeError("bridge offset must be in [0, 3]");
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<double, double>> coords;
    std::vector<int> row_start(rows);
    int n = 0;
    std::vector<std::vector<std::pair<int, int>>> bridges(std::max(0, rows - 1));
    for (int r = 0; r < rows; ++r) {
        row_start[r] = n;
        for (int c = 0; c < cols; ++c) {
            coords.emplace_back(c, 2.0 * r);
            ++n;
        }
        if (r + 1 < rows) {
            const int off = (r % 2 == 0) ? first_offset : (first_offset + 2) % 4;
            for (int c = off; c < cols; c += 4) {
                bridges[r].push_back({c, n});
                coords.emplace_back(c, 2.0 * r + 1);
                ++n;
            }
        }
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c + 1 < cols; ++c) {
            edges.emplace_back(row_start[r] + c, row_start[r] + c + 1);
        }
        if (r + 1 < rows) {
            for (const auto& [c, b] : bridges[r]) {
                edges.emplace_back(row_start[r] + c, b);
                edges.emplace_back(b, row_start[r + 1] + c);
            }
        }
    }
    return make_graph(n, std::move(edges), std::move(coords));
}

// The 19-site heavy-hex cell: two 12-site heavy hexagons stacked vertically,
// sharing their middle row. Three rows of five qubits at columns 0..4 with
// bridges at columns 0 and 4 in both gaps, indexed like the row generator.
inline LatticeGraph build_heavy_hex_cell19() {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<double, double>> coords;
    std::vector<int> row_start(3);
    int n = 0;
    std::vector<std::vector<std::pair<int, int>>> bridges(2);
    for (int r = 0; r < 3; ++r) {
        row_start[r] = n;
        for (int c = 0; c < 5; ++c) {
            coords.emplace_back(c, 2.0 * r);
            ++n;
        }
        if (r < 2) {
            for (int c : {0, 4}) {
                bridges[r].push_back({c, n});
                coords.emplace_back(c, 2.0 * r + 1);
                ++n;
            }
        }
    }
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c + 1 < 5; ++c) {
            edges.emplace_back(row_start[r] + c, row_start[r] + c + 1);
        }
        if (r < 2) {
            for (const auto& [c, b] : bridges[r]) {
                edges.emplace_back(row_start[r] + c, b);
                edges.emplace_back(b, row_start[r + 1] + c);
            }
        }
    }
    return make_graph(n, std::move(edges), std::move(coords));
}

enum class HeavyHexSize { L19, L28, L156 };

inline LatticeGraph build_heavy_hex(HeavyHexSize size) {
    switch (size) {
        case HeavyHexSize::L19:
            return build_heavy_hex_cell19();
        case HeavyHexSize::L28:
            // The 28-site patch equals the rows 0-2 / columns 0-7 window of L156.
            return build_heavy_hex_rows(3, 8, 3);
        case HeavyHexSize::L156:
            return build_heavy_hex_rows(8, 16, 3);
    }
    throw LatticeError("unsupported heavy-hex topology");
}

inline HeavyHexSize parse_heavy_hex_size(const std::string& name) {
    if (name == "L19" || name == "l19") return HeavyHexSize::L19;
    if (name == "L28" || name == "l28") return HeavyHexSize::L28;
    if (name == "L156" || name == "l156") return HeavyHexSize::L156;
    throw LatticeError("unsupported heavy-hex topology '" + name + "' (expected L19, L28 or L156)");
}

// Order-preserving induced subgraph on `sites` (kept sites are relabeled
// 0..|sites|-1 in the given order). Coordinates carry over.
inline LatticeGraph induced_subgraph(const LatticeGraph& g, const std::vector<int>& sites) {
    std::vector<int> relabel(g.num_sites, -1);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const int s = sites[i];
        if (s < 0 || s >= g.num_sites) throw LatticeError("subgraph site out of range");
        if (relabel[s] >= 0) throw LatticeError("subgraph site listed twice");
        relabel[s] = static_cast<int>(i);
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [a, b] : g.edges) {
        if (relabel[a] >= 0 && relabel[b] >= 0) edges.emplace_back(relabel[a], relabel[b]);
    }
    std::vector<std::pair<double, double>> coords(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) coords[i] = g.coords[sites[i]];
    return make_graph(static_cast<int>(sites.size()), std::move(edges), std::move(coords));
}

// BFS distances from `from` (-1 where unreachable).
inline std::vector<int> bfs_distances(const LatticeGraph& g, int from) {
    if (from < 0 || from >= g.num_sites) throw LatticeError("site index out of range");
    std::vector<int> dist(g.num_sites, -1);
    std::queue<int> frontier;
    dist[from] = 0;
    frontier.push(from);
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int w : g.adjacency[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                frontier.push(w);
            }
        }
    }
    return dist;
}

// All sites whose shortest-path distance from `center` is at most `radius`,
// including the center itself.
inline Neighborhood neighborhood(const LatticeGraph& g, int center, int radius) {
    if (radius < 0) throw LatticeError("neighborhood radius must be >= 0");
    const auto dist = bfs_distances(g, center);
    Neighborhood nh;
    nh.center = center;
    nh.radius = radius;
    for (int s = 0; s < g.num_sites; ++s) {
        if (dist[s] >= 0 && dist[s] <= radius) nh.members.push_back(s);
    }
    return nh;
}

// --- edge-list text format: one "i j" pair per line, '#' starts a comment ---

inline LatticeGraph load_edge_list(const std::string& text) {
    std::vector<std::pair<int, int>> edges;
    int max_site = -1;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long a = 0, b = 0;
        if (!(ls >> a)) continue;  // blank or comment-only line
        std::string rest;
        if (!(ls >> b) || (ls >> rest)) {
            throw LatticeError("edge list parse failure at line " + std::to_string(lineno) +
                               ": expected exactly two site indices");
        }
        if (a < 0 || b < 0) {
            throw LatticeError("negative site index at line " + std::to_string(lineno));
        }
        edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
        max_site = std::max<long>({max_site, a, b});
    }
    if (edges.empty()) throw LatticeError("edge list contains no edges");
    return make_graph(max_site + 1, std::move(edges));
}

inline std::string to_edge_list(const LatticeGraph& g) {
    std::ostringstream out;
    out << "# " << g.num_sites << " sites, " << g.num_edges() << " edges\n";
    for (const auto& [a, b] : g.edges) out << a << " " << b << "\n";
    return out.str();
}

inline nlohmann::json to_json(const LatticeGraph& g) {
    nlohmann::json j;
    j["num_sites"] = g.num_sites;
    j["edges"] = g.edges;
    j["layers"] = g.layer_of_edge;
    j["coords"] = g.coords;
    return j;
}

inline LatticeGraph from_json(const nlohmann::json& j) {
    const int n = j.at("num_sites").get<int>();
    auto edges = j.at("edges").get<std::vector<std::pair<int, int>>>();
    std::vector<std::pair<double, double>> coords;
    if (j.contains("coords")) coords = j.at("coords").get<std::vector<std::pair<double, double>>>();
    return make_graph(n, std::move(edges), std::move(coords));
}

}  // namespace floq
