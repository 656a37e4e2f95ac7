#include "entx/l1norm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "entx/simplex_lp.hpp"

namespace entx {

namespace {

std::map<int, int> position_of(const DeltaComplex& X, int k)
{
    std::map<int, int> pos;
    if (k < 0 || k > X.dimension()) return pos;
    const auto& simps = X.simplices(k);
    for (size_t i = 0; i < simps.size(); ++i) pos[simps[i].id] = static_cast<int>(i);
    return pos;
}

// Boundary matrix from (k+1)-chains to k-chains, with face multiplicity.
RatMatrix boundary_matrix_of(const DeltaComplex& X, int k)
{
    const int rows = X.count(k);
    const int cols = k + 1 <= X.dimension() ? X.count(k + 1) : 0;
    RatMatrix D(rows, cols);
    if (cols == 0) return D;
    auto pos = position_of(X, k);
    const auto& tops = X.simplices(k + 1);
    for (int c = 0; c < cols; ++c) {
        const auto& faces = tops[c].faces;
        for (size_t i = 0; i < faces.size(); ++i)
            D.at(pos.at(faces[i]), c) += (i % 2 == 0) ? Rat(1) : Rat(-1);
    }
    return D;
}

void check_problem(const NormProblem& p)
{
    if (!p.X) throw std::invalid_argument("norm problem: missing complex");
    if (p.degree < 0 || p.degree > p.X->dimension())
        throw std::invalid_argument("norm problem: degree out of range");
    if (p.cycle.degree() != p.degree)
        throw std::invalid_argument("norm problem: chain degree mismatch");
    for (const auto& [id, v] : p.cycle.entries())
        if (!p.X->has_simplex(id) || p.X->simplex_dim(id) != p.degree)
            throw std::invalid_argument("norm problem: cycle entry off-grade");
    if (p.degree >= 1 && !boundary(p.cycle, *p.X).is_zero())
        throw std::invalid_argument("norm problem: representative is not a cycle");
}

// LP data for: minimize |c0 + D (u+ - u-)|_1, variables p, n, u+, u-.
LinearProgram build_norm_lp(const DeltaComplex& X, int degree, const Chain& c0,
                            const RatMatrix& D, int extra_rows = 0, int extra_cols = 0)
{
    const int S = D.rows, K = D.cols;
    LinearProgram lp(S + extra_rows, 2 * S + 2 * K + extra_cols);
    auto pos = position_of(X, degree);
    for (int r = 0; r < S; ++r) {
        lp.A.at(r, r) = 1;
        lp.A.at(r, S + r) = -1;
        for (int k = 0; k < K; ++k) {
            lp.A.at(r, 2 * S + k) = -D.at(r, k);
            lp.A.at(r, 2 * S + K + k) = D.at(r, k);
        }
        lp.c[r] = 1;
        lp.c[S + r] = 1;
    }
    for (const auto& [id, v] : c0.entries()) lp.b[pos.at(id)] = v;
    return lp;
}

Chain extract_minimizer(const DeltaComplex& X, int degree, const std::vector<Rat>& x, int S)
{
    Chain z(degree);
    const auto& simps = X.simplices(degree);
    for (int r = 0; r < S; ++r) z.set(simps[r].id, x[r] - x[S + r]);
    return z;
}

} // namespace

NormResult l1_lp(const NormProblem& p)
{
    check_problem(p);
    if (p.ring != Ring::Rationals)
        throw std::invalid_argument("l1_lp: rational coefficient ring required");
    RatMatrix D = boundary_matrix_of(*p.X, p.degree);
    const int S = D.rows;
    LinearProgram lp = build_norm_lp(*p.X, p.degree, p.cycle, D);
    LPSolution sol = solve_lp(lp);
    if (sol.status != LPSolution::Status::Optimal)
        throw std::logic_error("l1_lp: solver failed on a feasible bounded program");
    NormResult res;
    res.value = sol.value;
    res.minimizer = extract_minimizer(*p.X, p.degree, sol.x, S);
    if (res.value == 0) {
        res.proof_tag = "zero-class";
        return res;
    }
    res.proof_tag = "lp-dual";
    const auto& simps = p.X->simplices(p.degree);
    for (int r = 0; r < S; ++r)
        if (sol.dual[r] != 0) res.certificate[simps[r].id] = sol.dual[r];
    return res;
}

NormResult l1_ilp(const NormProblem& p, int top_simplex_cap)
{
    check_problem(p);
    if (p.ring != Ring::Integers)
        throw std::invalid_argument("l1_ilp: integer coefficient ring required");
    for (const auto& [id, v] : p.cycle.entries())
        if (denominator(v) != 1)
            throw std::invalid_argument("l1_ilp: representative must be integral");
    if (p.X->count(p.X->dimension()) > top_simplex_cap)
        throw std::invalid_argument("l1_ilp: top simplex cap exceeded");

    RatMatrix D = boundary_matrix_of(*p.X, p.degree);
    const int S = D.rows, K = D.cols;
    struct Bound {
        int var;   // correction-chain coordinate
        bool upper;
        BigInt f;
    };
    Rat best_value = p.cycle.l1_norm(); // y = 0 incumbent
    std::vector<Rat> best_y(K, Rat(0));
    int nodes = 0;

    std::function<void(std::vector<Bound>&)> explore = [&](std::vector<Bound>& bounds) {
        if (++nodes > 20000) throw std::runtime_error("l1_ilp: node budget exceeded");
        const int extra = static_cast<int>(bounds.size());
        LinearProgram lp = build_norm_lp(*p.X, p.degree, p.cycle, D, extra, extra);
        for (int i = 0; i < extra; ++i) {
            int r = S + i, v = bounds[i].var;
            lp.A.at(r, 2 * S + v) = 1;
            lp.A.at(r, 2 * S + K + v) = -1;
            lp.A.at(r, 2 * S + 2 * K + i) = bounds[i].upper ? Rat(1) : Rat(-1);
            lp.b[r] = Rat(bounds[i].f);
        }
        LPSolution sol = solve_lp(lp);
        if (sol.status == LPSolution::Status::Infeasible) return;
        if (sol.status != LPSolution::Status::Optimal) return;
        if (sol.value >= best_value) return;
        // most fractional correction coordinate, ties by lowest simplex id
        int branch = -1;
        Rat branch_frac = 0;
        std::vector<Rat> y(K);
        for (int k = 0; k < K; ++k) {
            y[k] = sol.x[2 * S + k] - sol.x[2 * S + K + k];
            Rat fl = Rat(numerator(y[k]) / denominator(y[k]));
            if (y[k] < 0 && fl != y[k]) fl -= 1; // floor for negatives
            Rat frac = y[k] - fl;
            Rat dist = frac <= Rat(1, 2) ? frac : 1 - frac;
            if (dist > branch_frac) {
                branch_frac = dist;
                branch = k;
            }
        }
        if (branch < 0) { // integral optimum
            best_value = sol.value;
            best_y = y;
            return;
        }
        Rat fl = Rat(numerator(y[branch]) / denominator(y[branch]));
        if (y[branch] < 0 && fl != y[branch]) fl -= 1;
        BigInt f = numerator(fl);
        bounds.push_back({branch, true, f});
        explore(bounds);
        bounds.back() = {branch, false, f + 1};
        explore(bounds);
        bounds.pop_back();
    };
    std::vector<Bound> bounds;
    explore(bounds);

    NormResult res;
    res.value = best_value;
    res.proof_tag = "ilp-branch-bound";
    Chain z = p.cycle;
    const auto& simps = p.X->simplices(p.degree);
    for (int k = 0; k < K; ++k) {
        if (best_y[k] == 0) continue;
        for (int r = 0; r < S; ++r)
            if (D.at(r, k) != 0) z.add(simps[r].id, D.at(r, k) * best_y[k]);
    }
    res.minimizer = z;
    return res;
}

bool dual_certificate_check(const NormResult& r, const NormProblem& p)
{
    if (r.value == 0) return r.certificate.empty();
    // dual feasibility: entries bounded by 1 in absolute value, sup-norm exactly 1
    Rat sup = 0;
    for (const auto& [id, a] : r.certificate) {
        if (!p.X->has_simplex(id) || p.X->simplex_dim(id) != p.degree) return false;
        Rat m = abs(a);
        if (m > 1) return false;
        sup = std::max(sup, m);
    }
    if (sup != 1) return false;
    // vanishing on boundaries of all (p.degree+1)-simplices
    if (p.degree + 1 <= p.X->dimension()) {
        for (const auto& t : p.X->simplices(p.degree + 1)) {
            Rat pairing = 0;
            for (size_t i = 0; i < t.faces.size(); ++i) {
                auto it = r.certificate.find(t.faces[i]);
                if (it != r.certificate.end())
                    pairing += (i % 2 == 0 ? it->second : -it->second);
            }
            if (pairing != 0) return false;
        }
    }
    // pairing with the representative equals the claimed value
    Rat pairing = 0;
    for (const auto& [id, v] : p.cycle.entries()) {
        auto it = r.certificate.find(id);
        if (it != r.certificate.end()) pairing += it->second * v;
    }
    return pairing == r.value && r.minimizer.l1_norm() == r.value;
}

int kappa_of_cycle(const DeltaComplex& P)
{
    const int m = P.dimension();
    const auto& tops = P.simplices(m);
    if (tops.empty()) throw std::invalid_argument("not a geometric cycle: no top simplices");
    const int T = static_cast<int>(tops.size());

    // components of the facet-adjacency graph on top simplices
    std::map<int, std::vector<int>> by_facet;
    for (int i = 0; i < T; ++i)
        for (int f : tops[i].faces) by_facet[f].push_back(i);
    std::vector<int> comp(T, -1);
    int ncomp = 0;
    for (int i = 0; i < T; ++i) {
        if (comp[i] >= 0) continue;
        std::vector<int> stack{i};
        comp[i] = ncomp;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            for (int f : (m >= 1 ? tops[t].faces : std::vector<int>{}))
                for (int u : by_facet[f])
                    if (comp[u] < 0) {
                        comp[u] = ncomp;
                        stack.push_back(u);
                    }
        }
        ++ncomp;
    }

    std::set<int> covered;
    for (int cidx = 0; cidx < ncomp; ++cidx) {
        // closure of the component's top simplices
        std::set<int> ids;
        std::function<void(int)> close = [&](int id) {
            if (!ids.insert(id).second) return;
            for (int f : P.simplex(id).faces) close(f);
        };
        for (int i = 0; i < T; ++i)
            if (comp[i] == cidx) close(tops[i].id);
        covered.insert(ids.begin(), ids.end());

        // rebuild the component as its own complex and test it
        DeltaComplex sub(m);
        std::map<int, int> remap;
        for (int k = 0; k <= m; ++k) {
            for (const auto& s : P.simplices(k)) {
                if (!ids.count(s.id)) continue;
                if (k == 0) {
                    remap[s.id] = sub.add_vertex();
                } else {
                    std::vector<int> faces;
                    for (int f : s.faces) faces.push_back(remap.at(f));
                    remap[s.id] = sub.add_simplex(k, faces);
                }
            }
        }
        auto report = check_pseudomanifold(sub);
        for (const auto& [cond, id] : report.failures)
            if (cond != "P3") // components are facet-connected by construction
                throw std::invalid_argument("not a geometric cycle: " + cond + " fails");
    }
    // every simplex must support some top simplex
    for (int k = 0; k <= m; ++k)
        for (const auto& s : P.simplices(k))
            if (!covered.count(s.id))
                throw std::invalid_argument("not a geometric cycle: stray simplex");
    return T;
}

StableSequence fekete_estimate(const std::vector<std::pair<int, Rat>>& samples)
{
    if (samples.empty()) throw std::invalid_argument("fekete: no samples");
    std::map<int, Rat> by_n;
    for (const auto& [n, v] : samples) {
        if (n <= 0) throw std::invalid_argument("fekete: sample index must be positive");
        by_n[n] = v;
    }
    for (const auto& [n1, v1] : by_n)
        for (const auto& [n2, v2] : by_n) {
            auto it = by_n.find(n1 + n2);
            if (it != by_n.end() && it->second > v1 + v2)
                throw std::invalid_argument("fekete: subadditivity violated at n = " +
                                            std::to_string(n1 + n2));
        }
    StableSequence seq;
    seq.samples.assign(by_n.begin(), by_n.end());
    seq.subadditive_on_samples = true;
    bool first = true;
    for (const auto& [n, v] : by_n) {
        Rat ratio = v / n;
        if (first || ratio < seq.estimate) seq.estimate = ratio;
        first = false;
    }
    return seq;
}

Chain rationalize_cycle(const std::map<int, double>& c, const DeltaComplex& X, int degree,
                        double eps)
{
    if (eps <= 0) throw std::invalid_argument("rationalize: eps must be positive");
    Chain rounded(degree);
    for (const auto& [id, v] : c) {
        if (!X.has_simplex(id) || X.simplex_dim(id) != degree)
            throw std::invalid_argument("rationalize: entry off-grade");
        rounded.set(id, rationalize(v, eps));
    }
    if (degree == 0) return rounded;
    Chain defect = boundary(rounded, X);
    if (defect.is_zero()) return rounded;

    // minimum-l1 chain w in the same degree with boundary(w) = boundary(rounded)
    RatMatrix D = boundary_matrix_of(X, degree - 1); // (degree)-chains -> (degree-1)-chains
    const int R = D.rows, S = D.cols;
    LinearProgram lp(R, 2 * S);
    auto rpos = position_of(X, degree - 1);
    for (int r = 0; r < R; ++r)
        for (int s = 0; s < S; ++s) {
            lp.A.at(r, s) = D.at(r, s);
            lp.A.at(r, S + s) = -D.at(r, s);
        }
    for (int s = 0; s < 2 * S; ++s) lp.c[s] = 1;
    for (const auto& [id, v] : defect.entries()) lp.b[rpos.at(id)] = v;
    LPSolution sol = solve_lp(lp);
    if (sol.status != LPSolution::Status::Optimal)
        throw std::logic_error("rationalize: filling program failed");
    double budget = (degree + 2.0) * eps * (static_cast<double>(c.size()) + 1.0);
    if (to_double(sol.value) > budget)
        throw std::invalid_argument("rationalize: input is not approximately a cycle");
    Chain result = rounded;
    const auto& simps = X.simplices(degree);
    for (int s = 0; s < S; ++s) {
        Rat w = sol.x[s] - sol.x[S + s];
        if (w != 0) result.add(simps[s].id, -w);
    }
    return result;
}

} // namespace entx
