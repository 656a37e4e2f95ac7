#ifndef ENTX_FREE_PRODUCT_HPP
#define ENTX_FREE_PRODUCT_HPP

#include <cstdint>
#include <vector>

#include "entx/entropy.hpp"
#include "entx/metric_graph.hpp"
#include "entx/rational.hpp"

namespace entx {

/// Finite group by multiplication table; identity is element 0.
class FiniteGroupTable {
public:
    explicit FiniteGroupTable(std::vector<std::vector<int>> mult);
    static FiniteGroupTable cyclic(int n);

    int order() const { return static_cast<int>(mult_.size()); }
    int mul(int a, int b) const { return mult_[a][b]; }
    int inv(int a) const { return inv_[a]; }

private:
    std::vector<std::vector<int>> mult_;
    std::vector<int> inv_;
};

struct NormalFormLetter {
    int factor = 0; // 0 or 1
    int elem = 0;   // nontrivial element id within the factor
    double rho = 0; // orbit distance of the letter, when known
};

struct NormalForm {
    std::vector<NormalFormLetter> letters;
    int length() const { return static_cast<int>(letters.size()); }
};

// Reduced alternating word of a free product of two finite groups: adjacent
// same-factor letters multiplied, identities removed, to fixpoint.
NormalForm normal_form(const std::vector<std::pair<int, int>>& letters,
                       const FiniteGroupTable& g0, const FiniteGroupTable& g1);

/// One side of a dumbbell: a marked metric graph with a cover spec, its
/// relative entropy and volume, the orbit distance spectrum enumerated up to
/// a radius cap, and the orbit Poincare series F(h) = sum exp(-h rho).
struct FactorModel {
    MetricGraph graph;
    CoverSpec spec;
    double entropy = 0.0;
    double volume = 0.0;
    std::vector<double> spectrum; // nontrivial orbit distances <= radius_cap
    double radius_cap = 0.0;      // radius certified complete by the enumeration
    bool finite_cover = false;    // finite quotient: spectrum is the whole orbit
    bool universal_cover = false; // trivial spec or free quotient with trivial kernel

    static FactorModel build(const MetricGraph& g, const CoverSpec& spec,
                             uint64_t state_budget = 2'000'000,
                             double radius_request = 50.0);

    // F(h). Finite covers: the exact finite sum. Free covers: the exact
    // non-backtracking resolvent (no truncation error for h above entropy).
    double poincare(double h) const;

    FactorModel scaled_by(double lambda) const;
};

struct DumbbellModel {
    FactorModel f1;
    FactorModel f2;
    double half_length_d = 1.0; // bridge has length 2d
    double lambda1 = 1.0, lambda2 = 1.0;
    double alpha = 0.0; // common scaled factor entropy (0 for degenerate factors)
};

struct Balance {
    double lambda1 = 0.0, lambda2 = 0.0, alpha = 0.0;
};

// Closed form for m = 1: lambda_i = e_i / (e1 v1 + e2 v2), alpha = e1 v1 + e2 v2.
// Throws on zero factor entropy.
Balance balance_scalings(const FactorModel& f1, const FactorModel& f2);

// Dumbbell with factors scaled so both entropies equal alpha and the factor
// volumes sum to 1 (the bridge contributes 2d on top).
DumbbellModel make_balanced_dumbbell(const FactorModel& f1, const FactorModel& f2, double d);
DumbbellModel make_dumbbell(const FactorModel& f1, const FactorModel& f2, double d);

// Orbit distance 2 d l + sum of letter distances; letters must carry rho.
double orbit_distance(const NormalForm& nf, const DumbbellModel& model);

// v(t; d): orbit points within distance t, identity included. Exact lattice
// convolution when all distances share a rational quantum, otherwise direct
// enumeration. Throws if the factor spectra are not complete up to what t needs.
BigInt exact_ball_count(const DumbbellModel& model, double t);

// Upper bound 1 + sum_l C^l e^{a1 (t - (2d-1) l)} [t - (2d-1) l]^l / l!,
// valid for d > 1/2 when a1 exceeds the growth rate and C dominates the
// factor ball counts at horizon t0.
double analytic_ball_bound(const DumbbellModel& model, double t, double alpha1, double C,
                           double t0);

// Root h of F1(h) F2(h) e^{-4 h d} = 1, the divergence abscissa of the
// alternating orbit series; 0 when the series stays below 1.
double dumbbell_entropy_exact(const DumbbellModel& model);

struct AdditivityRow {
    double d = 0;
    double alpha = 0;
    double h_d = 0;
    double gap = 0;
};

std::vector<AdditivityRow> additivity_report(const FactorModel& f1, const FactorModel& f2,
                                             const std::vector<double>& d_list);

} // namespace entx

#endif
