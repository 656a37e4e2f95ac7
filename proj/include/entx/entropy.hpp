#ifndef ENTX_ENTROPY_HPP
#define ENTX_ENTROPY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "entx/metric_graph.hpp"

namespace entx {

struct EntropyEstimate {
    double value = 0.0;
    enum class Method { Perron, OrbitCount } method = Method::Perron;
    double horizon = 0.0; // t_max for orbit counts, tolerance for Perron
    double lower = 0.0;
    double upper = 0.0;
};

/// Non-backtracking directed-edge operator of a metric graph: states are the
/// directed edges of the 2-core, transitions continue through the head vertex
/// without immediate reversal, weighted exp(-h * length(target)).
struct NonBacktracking {
    struct Arc {
        int head_vertex;
        double length;
        std::vector<int> succ; // successor arc indices
    };
    std::vector<Arc> arcs;

    static NonBacktracking build(const MetricGraph& g);
    // Perron eigenvalue of the weighted operator at parameter h.
    // Collatz-Wielandt bracketed power iteration; `parallel` switches the
    // OpenMP kernel on (results agree with the serial path to 1e-12).
    double spectral_radius(double h, bool parallel = true) const;
    double spectral_radius_serial(double h) const;
};

// Volume entropy of the universal cover: the unique h >= 0 with spectral
// radius 1, by bisection to 1e-10. Zero for trees and circles.
EntropyEstimate entropy_perron(const MetricGraph& g);

struct OrbitCountOptions {
    double t_max = 25.0;
    uint64_t state_budget = 10'000'000;
    int grid_points = 24;
};

struct OrbitCountScan {
    std::vector<double> t;
    std::vector<uint64_t> count;
    std::vector<double> slope_estimate; // running chord slopes
};

// Lazy expansion of the cover named by `spec`; counts orbit points of the
// basepoint within radius t and regresses log-counts over the top half.
EntropyEstimate entropy_orbit_count(const MetricGraph& g, const CoverSpec& spec,
                                    const OrbitCountOptions& opts = {},
                                    OrbitCountScan* scan = nullptr);

// Relative volume entropy ent_H: finite quotients give 0, the trivial spec
// delegates to the Perron method, free quotients with trivial kernel reduce
// to the universal cover; other free quotients fall back to orbit counting.
EntropyEstimate entropy_relative(const MetricGraph& g, const CoverSpec& spec);

// ent_H(G) * total length (the m = 1 normalized invariant).
double omega_value(const MetricGraph& g, const CoverSpec& spec);

struct OmegaMinimum {
    std::vector<double> lengths;
    double omega = 0.0;
};

// Coordinate descent over edge lengths at fixed topology and total length.
OmegaMinimum minimize_omega_lengths(const MetricGraph& topology, double total_length,
                                    uint32_t seed = 1, int restarts = 4);

// Rank of the image subgroup of a free-quotient voltage assignment,
// via Stallings folding. Kernel is trivial iff this equals the rank of
// the graph's fundamental group.
int free_quotient_image_rank(const MetricGraph& g, const CoverSpec& spec);

} // namespace entx

#endif
