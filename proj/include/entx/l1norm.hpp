#ifndef ENTX_L1NORM_HPP
#define ENTX_L1NORM_HPP

#include <map>
#include <string>
#include <vector>

#include "entx/chain.hpp"
#include "entx/delta_complex.hpp"
#include "entx/rational.hpp"

namespace entx {

enum class Ring { Integers, Rationals };

struct NormProblem {
    const DeltaComplex* X = nullptr;
    int degree = 0;
    Chain cycle;             // integral representative c0 with boundary zero
    Ring ring = Ring::Rationals;
};

struct NormResult {
    Rat value = 0;
    Chain minimizer;                  // c0 + boundary of the optimal correction
    std::map<int, Rat> certificate;   // dual cochain: sup-norm 1, pairing = value
    std::string proof_tag;            // "lp-dual" | "ilp-branch-bound" | "zero-class"
};

// Minimum l1 norm of c0 + boundary(y) over rational (m+1)-chains y, by an
// exact split-variable LP; the dual cochain certifies optimality.
NormResult l1_lp(const NormProblem& p);

// Integral minimum over integer correction chains y, branch-and-bound on the
// most fractional coordinate (ties by lowest simplex id), seeded by the LP.
NormResult l1_ilp(const NormProblem& p, int top_simplex_cap = 64);

// Pairing 1 after normalization, vanishing on boundaries, value * sup = 1.
// Zero classes pass vacuously with an empty certificate.
bool dual_certificate_check(const NormResult& r, const NormProblem& p);

// Number of top simplices of a complex whose facet-connected components all
// satisfy the closed-pseudomanifold incidence conditions.
int kappa_of_cycle(const DeltaComplex& P);

struct StableSequence {
    std::vector<std::pair<int, Rat>> samples; // (n, value)
    Rat estimate = 0;                         // inf of value / n over samples
    bool subadditive_on_samples = false;
};

// Fekete bound: the limit of value/n exists and is at most every sampled
// ratio; checks subadditivity on every pair whose indices sum to a sample.
StableSequence fekete_estimate(const std::vector<std::pair<int, Rat>>& samples);

// Nearest rational cycle: round coefficients, then remove the defect by a
// minimum-l1 filling chain found with the LP. eps bounds the per-coefficient
// rounding error.
Chain rationalize_cycle(const std::map<int, double>& c, const DeltaComplex& X, int degree,
                        double eps);

} // namespace entx

#endif
