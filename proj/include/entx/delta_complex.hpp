#ifndef ENTX_DELTA_COMPLEX_HPP
#define ENTX_DELTA_COMPLEX_HPP

#include <optional>
#include <string>
#include <vector>

#include "entx/chain.hpp"
#include "entx/rational.hpp"

namespace entx {

/// Finite Delta-complex. A k-simplex (k >= 1) holds an ordered tuple of k+1
/// ids of (k-1)-simplices, its faces; face i is the one opposite vertex i.
/// Faces may repeat (loops, pillows and one-vertex surfaces are legal).
class DeltaComplex {
public:
    struct Simplex {
        int id = -1;
        std::vector<int> faces; // empty for vertices
    };

    explicit DeltaComplex(int dimension = 0);

    int dimension() const { return dim_; }

    // Simplices of dimension k, in insertion order.
    const std::vector<Simplex>& simplices(int k) const;
    int count(int k) const;

    int add_vertex();
    int add_simplex(int k, const std::vector<int>& face_ids);

    bool has_simplex(int id) const;
    int simplex_dim(int id) const;
    const Simplex& simplex(int id) const;

    // Checks grading of face references and the simplicial identity
    // d_i d_j = d_{j-1} d_i (i < j) at the incidence level.
    // Throws std::invalid_argument naming the offending simplex.
    void validate() const;

    int next_id() const { return next_id_; }

private:
    int dim_;
    int next_id_ = 0;
    std::vector<std::vector<Simplex>> by_dim_;
    std::vector<std::pair<int, int>> index_; // id -> (dim, position), dim=-1 if absent

    friend DeltaComplex parse_complex(const std::string&);
    int add_simplex_with_id(int k, int id, const std::vector<int>& face_ids);
};

struct PseudomanifoldReport {
    bool is_pseudomanifold = false;
    // (condition "P1"/"P2"/"P3", witness simplex id)
    std::vector<std::pair<std::string, int>> failures;
    bool orientable = false;
    std::optional<Chain> fundamental_cycle;
};

// Complex-description grammar, see docs: `dim <m>`, `vertex <id>`,
// `simplex <k> <id> : <faces>`, `#` comments.
DeltaComplex parse_complex(const std::string& text);
std::string export_complex(const DeltaComplex& X);

// Alternating-sign face sum, exact rationals.
Chain boundary(const Chain& c, const DeltaComplex& X);

PseudomanifoldReport check_pseudomanifold(const DeltaComplex& X);

// Rational Betti number in degree k plus a homology basis of cycles.
struct HomologyResult {
    int betti = 0;
    std::vector<Chain> cycle_basis;
};
HomologyResult homology_rank(const DeltaComplex& X, int k);

DeltaComplex barycentric_subdivide(const DeltaComplex& X);

// Wedge at a common vertex: v1 of X1 identified with v2 of X2.
DeltaComplex wedge(const DeltaComplex& X1, int v1, const DeltaComplex& X2, int v2);

// True iff an orientation exists; cross-checked against homology in tests.
bool orientation_double_check(const DeltaComplex& X);

// --- Stock complexes used across the test and verify suites ---
DeltaComplex make_circle();            // one vertex, one loop edge
DeltaComplex make_torus();             // one vertex, 3 edges, 2 triangles
DeltaComplex make_pillow();            // two triangles glued along all edges
DeltaComplex make_projective_plane();  // 2 triangles, 3 edges, 2 vertices
DeltaComplex make_genus2_surface();    // one vertex, 6 triangles
DeltaComplex make_single_triangle();

} // namespace entx

#endif
