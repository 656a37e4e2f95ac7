#ifndef ENTX_METRIC_GRAPH_HPP
#define ENTX_METRIC_GRAPH_HPP

#include <map>
#include <string>
#include <vector>

namespace entx {

/// Finite connected graph with strictly positive edge lengths.
/// Loops and parallel edges are allowed.
struct MetricGraph {
    struct Edge {
        std::string name;
        int u = 0;
        int v = 0;
        double length = 1.0;
    };

    int num_vertices = 0;
    std::vector<Edge> edges;
    int basepoint = 0;

    double total_length() const;
    bool connected() const;
    // First Betti number E - V + 1 of the connected graph.
    int fundamental_rank() const;
    void check() const; // throws on bad lengths, vertex ids, disconnection
};

MetricGraph parse_graph(const std::string& text);
std::string export_graph(const MetricGraph& g);

/// How to pass to a cover: trivial (universal cover), a finite-group voltage
/// assignment (permutations per edge), or a free-group voltage assignment
/// (words per edge). Voltages on a spanning tree are conventionally the
/// identity so that the labels read off the non-tree edges present a
/// homomorphism on the fundamental group.
struct CoverSpec {
    enum class Kind { Trivial, FiniteQuotient, FreeQuotient };
    Kind kind = Kind::Trivial;

    // FiniteQuotient: permutation of {0..degree-1} per edge name (identity if
    // absent). The deck group is the subgroup these permutations generate.
    int degree = 0;
    std::map<std::string, std::vector<int>> perms;

    // FreeQuotient: word per edge name as signed generator indices,
    // 1-based (2 means g2, -2 means g2^{-1}); empty word = identity.
    int free_rank = 0;
    std::map<std::string, std::vector<int>> words;

    static CoverSpec trivial() { return {}; }
    void check(const MetricGraph& g) const;
};

CoverSpec parse_cover_spec(const std::string& text);

// Explicit d-fold cyclic cover along one non-tree edge; used by the
// covering-invariance checks.
MetricGraph cyclic_cover(const MetricGraph& g, const std::string& edge_name, int sheets);

// Scaled copy: all lengths multiplied by lambda.
MetricGraph scaled(const MetricGraph& g, double lambda);

MetricGraph make_figure8(double l1 = 1.0, double l2 = 1.0);
MetricGraph make_theta();
MetricGraph make_wedge_of_circles(int n, double len = 1.0);
MetricGraph make_circle_graph(double len = 1.0);

} // namespace entx

#endif
