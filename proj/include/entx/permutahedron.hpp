#ifndef ENTX_PERMUTAHEDRON_HPP
#define ENTX_PERMUTAHEDRON_HPP

#include <vector>

#include "entx/entropy.hpp"
#include "entx/metric_graph.hpp"

namespace entx {

/// Faces of the permutahedron are ordered partitions of the coordinate
/// positions: blocks[0] carries the largest values. A face of dimension k has
/// m + 1 - k blocks; vertices are the all-singleton partitions.
using FaceBlocks = std::vector<std::vector<int>>;

struct Permutahedron {
    int m = 1;
    std::vector<std::vector<int>> vertices;       // permutations of 1..m+1
    std::vector<unsigned> facet_masks;            // proper nonempty position subsets
    std::vector<std::vector<int>> facet_vertices; // vertex indices on each facet
    std::vector<std::vector<FaceBlocks>> faces;   // faces[k]: k-dimensional faces
    std::vector<long long> f_vector;
    bool simple = false; // every vertex on exactly m facets

    std::vector<double> face_barycenter(const FaceBlocks& blocks) const;
};

Permutahedron build_permutahedron(int m); // 1 <= m <= 5

// The polytope cut from the standard simplex by the planes
// sum_{i in w} x_i <= 1 - (1/4)^{|w|} has the same labeled vertex-facet
// incidence as the permutahedron.
bool truncation_equivalence(int m); // m <= 3

// Euclidean m-volume inside the affine hyperplane, by summing the flag
// (barycentric) simplices with Gram determinants.
double permutahedron_volume(int m); // m <= 5

/// Quotient of 2^m permutahedral cells: facet F_w of sheet s is glued to the
/// same facet of the sheet with bit |w| flipped.
struct TomeiComplex {
    int m = 1;
    Permutahedron tile;
    int num_cells = 0;                          // 2^m
    std::vector<long long> cell_counts;         // k-cells of the quotient, k = 0..m
    long long euler = 0;
    MetricGraph skeleton;                       // quotient 1-skeleton, Euclidean lengths
    std::vector<std::pair<int, int>> dual_edges; // one per facet-gluing orbit
    bool gluing_involution_ok = false;
    bool two_cells_per_facet_ok = false;
};

TomeiComplex build_tomei(int m); // m <= 4

double tomei_volume(int m); // 2^m times the tile volume

// Volume-entropy bracket of the quotient's piecewise-flat metric, estimated
// on the 1-skeleton by orbit counting (a proxy: skeleton paths are no
// shorter than ambient ones).
EntropyEstimate tomei_entropy_estimate(int m, double t_max = 30.0);

struct ConstantReport {
    int m = 0;
    double v_m = 0;              // tile volume
    EntropyEstimate ent;         // skeleton entropy bracket
    double c_prime = 0;          // ent^m * v_m
    double c_factorial = 0;      // (m!)^3 * c_prime
    double c_subdivision = 0;    // ((m+1)!)^3 * c_prime, the measured subdivision factor
};

ConstantReport constants_report(int m, double t_max = 30.0);

// Piecewise-linear map onto the standard simplex sending facet F_w into the
// face spanned by {e_i : i in w}; linear on each flag simplex.
std::vector<double> theta_map(const Permutahedron& P, const std::vector<double>& x);

} // namespace entx

#endif
