#ifndef ENTX_SYSTOLE_HPP
#define ENTX_SYSTOLE_HPP

#include <array>
#include <string>
#include <vector>

#include "entx/metric_graph.hpp"

namespace entx {

/// Free group of the given rank, marked with a homomorphism to a finite
/// group given on the generators (the backend solves the image word problem).
struct MarkedGroup {
    enum class Backend { Free, Permutation, Matrix };
    Backend backend = Backend::Free;
    int rank = 0;

    // Permutation backend: image of each generator on {0..n-1}
    std::vector<std::vector<int>> perm_images;

    // Matrix backend: 2x2 matrices over Z/mod, row-major (a,b,c,d)
    int mod = 0;
    std::vector<std::array<int, 4>> matrix_images;

    void check() const;
};

MarkedGroup make_free_group(int rank);
// F2 marked by A = [[1,2],[0,1]], B = [[1,0],[2,1]] in SL2(Z/n).
MarkedGroup make_sl2_mod(int n);
// F2 marked by its abelianization mod 2 (Klein four-group on 4 points).
MarkedGroup make_abelianized_mod2();

/// Subgroup of the marked free group: everything, the kernel of the marking,
/// or an explicit right action on cosets (one permutation per generator).
struct SubgroupSpec {
    enum class Kind { WholeGroup, MarkingKernel, CosetTable };
    Kind kind = Kind::MarkingKernel;
    std::vector<std::vector<int>> coset_action; // CosetTable only

    static SubgroupSpec whole_group() { return {Kind::WholeGroup, {}}; }
    static SubgroupSpec kernel() { return {Kind::MarkingKernel, {}}; }
    static SubgroupSpec cosets(std::vector<std::vector<int>> action)
    {
        return {Kind::CosetTable, std::move(action)};
    }
};

struct SchreierGraph {
    int index = 0;                       // number of cosets
    int rank = 0;                        // generators (inverses implicit)
    std::vector<std::vector<int>> next;  // next[coset][gen]
    std::vector<std::vector<int>> prev;  // inverse action
    int base = 0;
};

// Coset graph by orbit enumeration of the generator images (cap 10^7).
SchreierGraph schreier_graph(const MarkedGroup& g, const SubgroupSpec& sub);

// Least word length of a nontrivial element of the subgroup: the shortest
// reduced word closing up at the base coset.
int cayley_systole(const MarkedGroup& g, const SubgroupSpec& sub);

// Least length of a loop (based anywhere) whose image in the quotient named
// by the cover spec is nontrivial; +infinity when no loop is essential.
double graph_systole_essential(const MetricGraph& G, const CoverSpec& spec,
                               uint64_t state_budget = 2'000'000);

struct SystoleScan {
    struct Row {
        long long k = 0;   // index of the subgroup
        int sys = 0;       // word-metric systole
        double vol = 0.0;  // k * base volume
        double ratio = 0.0; // vol / sys^m
    };
    int m = 1;
    std::vector<Row> rows;
    double fit_c = 0.0;        // least-squares slope of sys against log k
    double fit_intercept = 0.0;
    double max_abs_residual = 0.0;
};

// Scans a family of subgroups (index-increasing), volume k x rank per row.
SystoleScan sigma_scan_multiples(const MarkedGroup& g,
                                 const std::vector<SubgroupSpec>& family, int m);

// The scan for F2 -> SL2(Z/p) kernels over the given primes.
SystoleScan sl2_family_scan(const std::vector<int>& primes, int m = 1);

/// Comparison profile h(k) for the tail estimator.
struct GrowthProfile {
    bool linear = false; // h(k) = k
    int m = 1;           // otherwise h(k) = k / (log k)^m

    double operator()(double k) const;
};

// limsup estimate of rho_k / h(k): maximum over the top half of the samples
// (an estimator, not the true limsup). Needs at least 4 samples with k >= 2.
double stabilized_seminorm(const std::vector<std::pair<int, double>>& samples,
                           const GrowthProfile& h);

} // namespace entx

#endif
