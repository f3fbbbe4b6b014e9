#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>

#include "floq/lattice.hpp"
#include "floq/mps.hpp"

using namespace floq;

namespace {

// Direct scan: no two edges sharing a site may share a layer.
void check_proper_coloring(const LatticeGraph& g) {
    for (int s = 0; s < g.num_sites; ++s) {
        std::set<int> layers;
        for (int e = 0; e < g.num_edges(); ++e) {
            if (g.edges[e].first == s || g.edges[e].second == s) {
                INFO("site " << s << " edge " << e);
                CHECK(layers.insert(g.layer_of_edge[e]).second);
            }
        }
    }
}

// Brute-force all-pairs shortest paths by repeated relaxation.
std::vector<std::vector<int>> floyd_distances(const LatticeGraph& g) {
    const int n = g.num_sites;
    const int inf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& [a, b] : g.edges) d[a][b] = d[b][a] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

}  // namespace

TEST_CASE("built-in heavy-hex generators", "[lattice]") {
    const LatticeGraph l19 = build_heavy_hex(HeavyHexSize::L19);
    CHECK(l19.num_sites == 19);
    // Two stacked heavy hexagons: 3 rows x 4 chain edges + 4 bridges x 2.
    CHECK(l19.num_edges() == 20);
    CHECK(l19.max_degree() == 3);
    CHECK(l19.num_layers == 3);
    CHECK(l19.connected());
    check_proper_coloring(l19);

    const LatticeGraph l28 = build_heavy_hex(HeavyHexSize::L28);
    CHECK(l28.num_sites == 28);
    CHECK(l28.max_degree() == 3);
    CHECK(l28.num_layers == 3);
    CHECK(l28.connected());

    const LatticeGraph l156 = build_heavy_hex(HeavyHexSize::L156);
    CHECK(l156.num_sites == 156);
    CHECK(l156.num_edges() == 176);
    CHECK(l156.max_degree() == 3);
    CHECK(l156.num_layers == 3);
    CHECK(l156.connected());
    check_proper_coloring(l156);

    CHECK_THROWS_AS(parse_heavy_hex_size("L100"), LatticeError);
}

TEST_CASE("generators are deterministic", "[lattice]") {
    const LatticeGraph a = build_heavy_hex(HeavyHexSize::L156);
    const LatticeGraph b = build_heavy_hex(HeavyHexSize::L156);
    CHECK(a.edges == b.edges);
    CHECK(a.layer_of_edge == b.layer_of_edge);
    CHECK(a.coords == b.coords);
}

TEST_CASE("each layer of a proper coloring is a matching", "[lattice]") {
    const LatticeGraph g = build_heavy_hex(HeavyHexSize::L156);
    for (int layer = 0; layer < g.num_layers; ++layer) {
        std::set<int> covered;
        for (int e = 0; e < g.num_edges(); ++e) {
            if (g.layer_of_edge[e] != layer) continue;
            CHECK(covered.insert(g.edges[e].first).second);
            CHECK(covered.insert(g.edges[e].second).second);
        }
    }
}

TEST_CASE("coloring of small canonical graphs", "[lattice]") {
    const LatticeGraph path = make_graph(3, {{0, 1}, {1, 2}});
    CHECK(path.num_layers == 2);
    CHECK(path.layer_of_edge[0] != path.layer_of_edge[1]);

    const LatticeGraph triangle = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(triangle.num_layers == 3);
    check_proper_coloring(triangle);

    const LatticeGraph star = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(star.num_layers == 3);
    check_proper_coloring(star);

    // Degree > 3 exceeds three layers and raises the overflow flag.
    const LatticeGraph star5 = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK(star5.num_layers == 4);
    CHECK(star5.layer_overflow);
    check_proper_coloring(star5);
}

TEST_CASE("edge-list round trip and validation", "[lattice]") {
    const LatticeGraph tiny = load_edge_list("0 1\n");
    CHECK(tiny.num_sites == 2);
    CHECK(tiny.num_edges() == 1);

    const LatticeGraph tri = load_edge_list("# odd cycle\n0 1\n1 2\n2 0\n");
    CHECK(tri.num_layers == 3);

    CHECK_THROWS_AS(load_edge_list("0 1\n0 1\n"), LatticeError);   // duplicate
    CHECK_THROWS_AS(load_edge_list("0 0\n"), LatticeError);        // self-loop
    CHECK_THROWS_AS(load_edge_list("0 1 2\n"), LatticeError);      // malformed
    CHECK_THROWS_AS(load_edge_list("0 -1\n"), LatticeError);       // negative index
    CHECK_THROWS_AS(load_edge_list("# only comments\n"), LatticeError);

    // Exported edge list reproduces the generator graph exactly.
    const LatticeGraph l28 = build_heavy_hex(HeavyHexSize::L28);
    const LatticeGraph reloaded = load_edge_list(to_edge_list(l28));
    CHECK(reloaded.num_sites == l28.num_sites);
    CHECK(reloaded.edges == l28.edges);
    CHECK(reloaded.layer_of_edge == l28.layer_of_edge);
}

TEST_CASE("L28 equals the rows 0-2 / cols 0-7 window of L156", "[lattice]") {
    const LatticeGraph l156 = build_heavy_hex(HeavyHexSize::L156);
    const LatticeGraph l28 = build_heavy_hex(HeavyHexSize::L28);
    // Window sites in canonical (interleaved row-major) order: row r covers
    // cols 0..15 from offset r*20; gap-r bridges follow at cols {3,7,11,15}
    // or {1,5,9,13}.
    std::vector<int> window;
    int idx = 0;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 16; ++c, ++idx) {
            if (r < 3 && c < 8) window.push_back(idx);
        }
        if (r < 7) {
            const int off = (r % 2 == 0) ? 3 : 1;
            for (int c = off; c < 16; c += 4, ++idx) {
                if (r < 2 && c < 8) window.push_back(idx);
            }
        }
    }
    REQUIRE(window.size() == 28);
    const LatticeGraph sub = induced_subgraph(l156, window);
    CHECK(sub.edges == l28.edges);
}

TEST_CASE("graph JSON round trip", "[lattice]") {
    const LatticeGraph g = build_heavy_hex(HeavyHexSize::L19);
    const LatticeGraph back = from_json(to_json(g));
    CHECK(back.num_sites == g.num_sites);
    CHECK(back.edges == g.edges);
    CHECK(back.layer_of_edge == g.layer_of_edge);
    CHECK(back.coords == g.coords);
}

TEST_CASE("neighborhoods are BFS balls", "[lattice]") {
    const LatticeGraph g = build_heavy_hex(HeavyHexSize::L19);

    const Neighborhood k0 = neighborhood(g, 7, 0);
    CHECK(k0.members == std::vector<int>{7});

    // Full ball at radius >= diameter.
    const Neighborhood all = neighborhood(g, 0, g.num_sites);
    CHECK(static_cast<int>(all.members.size()) == g.num_sites);

    // Nested in the radius and consistent with brute-force distances.
    const auto brute = floyd_distances(g);
    for (int j = 0; j < g.num_sites; ++j) {
        std::size_t prev = 0;
        for (int k = 0; k <= 9; ++k) {
            const Neighborhood nh = neighborhood(g, j, k);
            CHECK(nh.members.size() >= prev);
            prev = nh.members.size();
            std::size_t expected = 0;
            for (int s = 0; s < g.num_sites; ++s) {
                if (brute[j][s] <= k) ++expected;
            }
            CHECK(nh.members.size() == expected);
            CHECK(std::binary_search(nh.members.begin(), nh.members.end(), j));
        }
    }

    CHECK_THROWS(neighborhood(g, -1, 2));
    CHECK_THROWS(neighborhood(g, 99, 2));
    CHECK_THROWS(neighborhood(g, 0, -1));
}

TEST_CASE("L156 radius-4 neighborhoods hold about 16 sites on average", "[lattice]") {
    const LatticeGraph g = build_heavy_hex(HeavyHexSize::L156);
    double total = 0.0;
    for (int j = 0; j < g.num_sites; ++j) {
        total += static_cast<double>(neighborhood(g, j, 4).members.size());
    }
    const double mean = total / g.num_sites;
    CHECK(mean > 14.0);
    CHECK(mean < 18.0);
}

TEST_CASE("chain ordering keeps lattice edges short", "[lattice][mps]") {
    const LatticeGraph l19 = build_heavy_hex(HeavyHexSize::L19);
    const auto order19 = choose_ordering(l19);
    std::vector<int> sorted(order19);
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(l19.num_sites);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(sorted == expect);
    CHECK(max_chain_distance(l19, order19) <= 6);

    // Path graphs order into (reversed) chains with unit edge distances.
    const LatticeGraph path = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    CHECK(max_chain_distance(path, choose_ordering(path)) == 1);

    CHECK(choose_ordering(l19) == choose_ordering(l19));
}

TEST_CASE("induced subgraph validates its site list", "[lattice]") {
    const LatticeGraph g = build_heavy_hex(HeavyHexSize::L19);
    CHECK_THROWS_AS(induced_subgraph(g, {0, 0}), LatticeError);
    CHECK_THROWS_AS(induced_subgraph(g, {0, 99}), LatticeError);
    const LatticeGraph sub = induced_subgraph(g, {0, 1, 2});
    CHECK(sub.num_sites == 3);
    CHECK(sub.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}
