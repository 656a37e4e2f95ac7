#include "entx/free_product.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace entx {

// ---------------------------------------------------------------------------
// finite groups and normal forms

FiniteGroupTable::FiniteGroupTable(std::vector<std::vector<int>> mult) : mult_(std::move(mult))
{
    const int n = static_cast<int>(mult_.size());
    if (n == 0) throw std::invalid_argument("group table: empty");
    inv_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(mult_[a].size()) != n)
            throw std::invalid_argument("group table: not square");
        if (mult_[a][0] != a || mult_[0][a] != a)
            throw std::invalid_argument("group table: element 0 is not the identity");
        for (int b = 0; b < n; ++b) {
            int ab = mult_[a][b];
            if (ab < 0 || ab >= n) throw std::invalid_argument("group table: entry out of range");
            if (ab == 0) inv_[a] = b;
        }
        if (inv_[a] < 0) throw std::invalid_argument("group table: element has no inverse");
    }
}

FiniteGroupTable FiniteGroupTable::cyclic(int n)
{
    if (n <= 0) throw std::invalid_argument("cyclic group: order must be positive");
    std::vector<std::vector<int>> mult(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mult[a][b] = (a + b) % n;
    return FiniteGroupTable(std::move(mult));
}

NormalForm normal_form(const std::vector<std::pair<int, int>>& letters,
                       const FiniteGroupTable& g0, const FiniteGroupTable& g1)
{
    NormalForm nf;
    for (auto [factor, elem] : letters) {
        if (factor != 0 && factor != 1)
            throw std::invalid_argument("normal form: factor must be 0 or 1");
        const FiniteGroupTable& g = factor == 0 ? g0 : g1;
        if (elem < 0 || elem >= g.order())
            throw std::invalid_argument("normal form: element out of range");
        if (elem == 0) continue;
        if (!nf.letters.empty() && nf.letters.back().factor == factor) {
            int prod = g.mul(nf.letters.back().elem, elem);
            if (prod == 0)
                nf.letters.pop_back();
            else
                nf.letters.back().elem = prod;
        } else {
            nf.letters.push_back({factor, elem, 0.0});
        }
    }
    return nf;
}

// ---------------------------------------------------------------------------
// factor models

namespace {

// Budgeted Dijkstra over a keyed cover. Returns the distances of basepoint
// lifts; `completed` receives the radius up to which the list is certified
// complete (the full radius if the expansion exhausted the state space).
template <typename Key, typename Expand>
std::vector<double> budgeted_orbit(const MetricGraph& g, double radius, uint64_t budget,
                                   const Key& start, Expand&& expand, double* completed)
{
    std::map<Key, double> dist;
    using QItem = std::pair<double, Key>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    dist[start] = 0.0;
    pq.push({0.0, start});
    std::vector<double> hits;
    double cap = radius;
    while (!pq.empty()) {
        auto [d, key] = pq.top();
        pq.pop();
        auto it = dist.find(key);
        if (it == dist.end() || it->second < d) continue;
        if (dist.size() > budget) {
            cap = d - 1e-9; // everything strictly below d has been settled
            break;
        }
        if (key.first == g.basepoint) hits.push_back(d);
        expand(key, d, [&](const Key& next, double nd) {
            if (nd > radius) return;
            auto [jt, inserted] = dist.try_emplace(next, nd);
            if (!inserted && jt->second <= nd) return;
            jt->second = nd;
            pq.push({nd, next});
        });
    }
    std::erase_if(hits, [&](double d) { return d > cap; });
    *completed = cap;
    return hits;
}

std::vector<double> sheet_orbit(const MetricGraph& g, const CoverSpec& spec, double radius,
                                uint64_t budget, double* completed)
{
    using Key = std::pair<int, std::vector<int>>;
    std::vector<int> ident(spec.degree);
    std::iota(ident.begin(), ident.end(), 0);
    return budgeted_orbit(
        g, radius, budget, Key{g.basepoint, ident},
        [&](const Key& key, double d, auto&& push) {
            for (const auto& e : g.edges) {
                std::vector<int> perm(spec.degree);
                std::iota(perm.begin(), perm.end(), 0);
                auto it = spec.perms.find(e.name);
                if (it != spec.perms.end()) perm = it->second;
                if (e.u == key.first) {
                    std::vector<int> nxt(spec.degree);
                    for (int i = 0; i < spec.degree; ++i) nxt[i] = perm[key.second[i]];
                    push({e.v, nxt}, d + e.length);
                }
                if (e.v == key.first) {
                    std::vector<int> inv(spec.degree);
                    for (int i = 0; i < spec.degree; ++i) inv[perm[i]] = i;
                    std::vector<int> nxt(spec.degree);
                    for (int i = 0; i < spec.degree; ++i) nxt[i] = inv[key.second[i]];
                    push({e.u, nxt}, d + e.length);
                }
            }
        },
        completed);
}

std::vector<double> word_orbit(const MetricGraph& g, const std::map<std::string, std::vector<int>>& words,
                               double radius, uint64_t budget, double* completed)
{
    using Key = std::pair<int, std::vector<int>>;
    auto append = [](std::vector<int> w, const std::vector<int>& suffix, bool invert) {
        if (!invert) {
            for (int l : suffix) {
                if (!w.empty() && w.back() == -l)
                    w.pop_back();
                else if (l != 0)
                    w.push_back(l);
            }
        } else {
            for (auto it = suffix.rbegin(); it != suffix.rend(); ++it) {
                int l = -*it;
                if (!w.empty() && w.back() == -l)
                    w.pop_back();
                else if (l != 0)
                    w.push_back(l);
            }
        }
        return w;
    };
    return budgeted_orbit(
        g, radius, budget, Key{g.basepoint, {}},
        [&](const Key& key, double d, auto&& push) {
            for (const auto& e : g.edges) {
                std::vector<int> word;
                auto it = words.find(e.name);
                if (it != words.end()) word = it->second;
                if (e.u == key.first) push({e.v, append(key.second, word, false)}, d + e.length);
                if (e.v == key.first) push({e.u, append(key.second, word, true)}, d + e.length);
            }
        },
        completed);
}

} // namespace

FactorModel FactorModel::build(const MetricGraph& g, const CoverSpec& spec, uint64_t state_budget,
                               double radius_request)
{
    g.check();
    spec.check(g);
    FactorModel f;
    f.graph = g;
    f.spec = spec;
    f.entropy = entropy_relative(g, spec).value;
    f.volume = g.total_length();

    double completed = 0.0;
    std::vector<double> hits;
    if (spec.kind == CoverSpec::Kind::FiniteQuotient) {
        f.finite_cover = true;
        hits = sheet_orbit(g, spec, 1e18, state_budget, &completed);
        if (completed < 1e18)
            throw std::runtime_error("factor model: state budget exceeded on a finite cover");
    } else {
        std::map<std::string, std::vector<int>> words;
        if (spec.kind == CoverSpec::Kind::Trivial ||
            free_quotient_image_rank(g, spec) == g.fundamental_rank()) {
            f.universal_cover = true;
            int gen = 1;
            for (const auto& e : g.edges) words[e.name] = {gen++};
        } else {
            words = spec.words;
        }
        hits = word_orbit(g, words, radius_request, state_budget, &completed);
    }
    f.radius_cap = completed;
    std::sort(hits.begin(), hits.end());
    for (double d : hits)
        if (d > 1e-12) f.spectrum.push_back(d);
    return f;
}

FactorModel FactorModel::scaled_by(double lambda) const
{
    if (!(lambda > 0)) throw std::invalid_argument("factor model: scale must be positive");
    FactorModel f;
    f.graph = scaled(graph, lambda);
    f.spec = spec;
    f.entropy = entropy / lambda;
    f.volume = volume * lambda;
    f.finite_cover = finite_cover;
    f.universal_cover = universal_cover;
    f.radius_cap = radius_cap * lambda;
    f.spectrum = spectrum;
    for (double& d : f.spectrum) d *= lambda;
    return f;
}

double FactorModel::poincare(double h) const
{
    if (finite_cover) {
        double sum = 0.0;
        for (double rho : spectrum) sum += std::exp(-h * rho);
        return sum;
    }
    if (universal_cover) {
        // Exact value by the non-backtracking resolvent: G[a], the weighted
        // count of reduced paths starting with arc a and ending at the
        // basepoint, satisfies G[a] - w_a sum_{b in succ(a)} G[b] = w_a [head(a) = base];
        // F(h) is the sum of G over arcs leaving the basepoint. Finite only
        // above the entropy, where the defining series converges.
        NonBacktracking nb = NonBacktracking::build(graph);
        const int n = static_cast<int>(nb.arcs.size());
        if (n == 0) return 0.0;
        int base = graph.basepoint;
        bool base_alive = false;
        for (const auto& a : nb.arcs) base_alive |= a.head_vertex == base;
        if (!base_alive)
            throw std::runtime_error("factor model: basepoint outside the graph core");
        if (nb.spectral_radius(h) >= 1.0 - 1e-12)
            return std::numeric_limits<double>::infinity();

        std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
        std::vector<double> rhs(n, 0.0);
        for (int a = 0; a < n; ++a) {
            double w = std::exp(-h * nb.arcs[a].length);
            A[a][a] += 1.0;
            for (int b : nb.arcs[a].succ) A[a][b] -= w;
            if (nb.arcs[a].head_vertex == base) rhs[a] = w;
        }
        // Gaussian elimination with partial pivoting.
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
            std::swap(A[col], A[piv]);
            std::swap(rhs[col], rhs[piv]);
            if (std::abs(A[col][col]) < 1e-300)
                return std::numeric_limits<double>::infinity();
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                double factor = A[r][col] / A[col][col];
                if (factor == 0.0) continue;
                for (int c = col; c < n; ++c) A[r][c] -= factor * A[col][c];
                rhs[r] -= factor * rhs[col];
            }
        }
        double sum = 0.0;
        for (int a = 0; a < n; ++a)
            if (nb.arcs[a ^ 1].head_vertex == base) sum += rhs[a] / A[a][a];
        return sum;
    }
    // Word cover with nontrivial kernel: truncated sum over the enumerated
    // spectrum (complete up to radius_cap).
    double sum = 0.0;
    for (double rho : spectrum) sum += std::exp(-h * rho);
    return sum;
}

// ---------------------------------------------------------------------------
// dumbbells

Balance balance_scalings(const FactorModel& f1, const FactorModel& f2)
{
    if (f1.entropy <= 0 || f2.entropy <= 0)
        throw std::invalid_argument("balance: both factors need positive entropy");
    Balance b;
    b.alpha = f1.entropy * f1.volume + f2.entropy * f2.volume;
    b.lambda1 = f1.entropy / b.alpha;
    b.lambda2 = f2.entropy / b.alpha;
    return b;
}

DumbbellModel make_dumbbell(const FactorModel& f1, const FactorModel& f2, double d)
{
    if (!(d > 0)) throw std::invalid_argument("dumbbell: d must be positive");
    DumbbellModel m;
    m.f1 = f1;
    m.f2 = f2;
    m.half_length_d = d;
    m.alpha = std::max(f1.entropy, f2.entropy);
    return m;
}

DumbbellModel make_balanced_dumbbell(const FactorModel& f1, const FactorModel& f2, double d)
{
    Balance b = balance_scalings(f1, f2);
    DumbbellModel m = make_dumbbell(f1.scaled_by(b.lambda1), f2.scaled_by(b.lambda2), d);
    m.lambda1 = b.lambda1;
    m.lambda2 = b.lambda2;
    m.alpha = b.alpha;
    return m;
}

double orbit_distance(const NormalForm& nf, const DumbbellModel& model)
{
    double sum = 2.0 * model.half_length_d * nf.length();
    for (const auto& l : nf.letters) sum += l.rho;
    return sum;
}

namespace {

struct LetterCosts {
    // (cost, multiplicity) per factor; cost = rho + 2d
    std::vector<std::pair<double, BigInt>> costs[2];
};

LetterCosts gather_costs(const DumbbellModel& model, double t)
{
    LetterCosts lc;
    double need = t - 2.0 * model.half_length_d; // largest usable letter distance
    const FactorModel* fs[2] = {&model.f1, &model.f2};
    for (int i = 0; i < 2; ++i) {
        if (!fs[i]->finite_cover && fs[i]->radius_cap < need - 1e-12)
            throw std::runtime_error("ball count: factor spectrum incomplete for this horizon");
        std::map<double, BigInt> grouped;
        for (double rho : fs[i]->spectrum)
            if (rho <= need + 1e-12) grouped[rho] += 1;
        for (auto& [rho, mult] : grouped)
            lc.costs[i].push_back({rho + 2.0 * model.half_length_d, mult});
    }
    return lc;
}

BigInt count_by_recursion(const LetterCosts& lc, double t)
{
    // g(budget, factor): alternating words whose first letter comes from
    // `factor`, all letters carrying cost rho + 2d, total at most budget.
    std::function<BigInt(double, int)> g = [&](double budget, int factor) -> BigInt {
        BigInt total = 0;
        for (const auto& [cost, mult] : lc.costs[factor]) {
            if (cost > budget + 1e-12) break;
            total += mult * (1 + g(budget - cost, 1 - factor));
        }
        return total;
    };
    return 1 + g(t, 0) + g(t, 1);
}

} // namespace

BigInt exact_ball_count(const DumbbellModel& model, double t)
{
    if (t < 0) return 0;
    LetterCosts lc = gather_costs(model, t);

    // Try a common rational quantum for an exact lattice convolution.
    BigInt lcm_den = 1;
    bool lattice_ok = true;
    auto account = [&](double x) {
        Rat r = rationalize(x, 1e-9);
        if (std::abs(to_double(r) - x) > 1e-9 || denominator(r) > 1'000'000) {
            lattice_ok = false;
            return;
        }
        lcm_den = boost::multiprecision::lcm(lcm_den, denominator(r));
    };
    for (int i = 0; i < 2 && lattice_ok; ++i)
        for (const auto& [cost, mult] : lc.costs[i]) account(cost);
    if (lattice_ok && lcm_den > 1'000'000) lattice_ok = false;
    if (!lattice_ok) return count_by_recursion(lc, t);

    const double L = static_cast<double>(lcm_den.convert_to<long long>());
    const long long bins = static_cast<long long>(std::floor(t * L + 1e-6));
    if (bins < 0) return 1;
    if (bins > 4'000'000) return count_by_recursion(lc, t);

    std::vector<std::pair<long long, BigInt>> qcosts[2];
    for (int i = 0; i < 2; ++i)
        for (const auto& [cost, mult] : lc.costs[i]) {
            long long q = std::llround(cost * L);
            if (q <= bins) qcosts[i].push_back({q, mult});
        }

    // f[b][last]: alternating words of quantized total exactly b whose last
    // letter comes from factor `last`.
    std::vector<std::array<BigInt, 2>> f(bins + 1);
    for (int i = 0; i < 2; ++i)
        for (const auto& [q, mult] : qcosts[i]) f[q][i] += mult;
    BigInt total = 1; // identity
    for (long long b = 1; b <= bins; ++b) {
        for (int last = 0; last < 2; ++last) {
            if (f[b][last] == 0) continue;
            total += f[b][last];
            for (const auto& [q, mult] : qcosts[1 - last])
                if (b + q <= bins) f[b + q][1 - last] += f[b][last] * mult;
        }
    }
    return total;
}

double analytic_ball_bound(const DumbbellModel& model, double t, double alpha1, double C,
                           double t0)
{
    double d = model.half_length_d;
    if (d <= 0.5)
        throw std::invalid_argument("analytic bound: requires d > 1/2");
    if (alpha1 <= 0 || C < 1 || t0 <= 0)
        throw std::invalid_argument("analytic bound: constants must be positive (C >= 1)");
    double bound = 1.0; // identity
    for (int l = 1;; ++l) {
        double s = t - (2.0 * d - 1.0) * l;
        if (s <= 0) break;
        double log_term = l * std::log(C) + alpha1 * s + l * std::log(s) - std::lgamma(l + 1.0);
        bound += std::exp(log_term);
        if (l > 10'000) break;
    }
    return bound;
}

double dumbbell_entropy_exact(const DumbbellModel& model)
{
    const double d = model.half_length_d;
    auto phi = [&](double h) {
        double f1 = model.f1.poincare(h);
        double f2 = model.f2.poincare(h);
        if (!std::isfinite(f1) || !std::isfinite(f2))
            return std::numeric_limits<double>::infinity();
        return f1 * f2 * std::exp(-4.0 * h * d);
    };
    double lo = std::max(model.f1.entropy, model.f2.entropy);
    if (lo == 0.0 && phi(0.0) <= 1.0 + 1e-13) return 0.0;
    double step = 1.0;
    double hi = lo + step;
    while (phi(hi) > 1.0) {
        step *= 2.0;
        hi = lo + step;
        if (step > 1e6)
            throw std::runtime_error("dumbbell entropy: series never drops below 1");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        double mid = 0.5 * (lo + hi);
        (phi(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<AdditivityRow> additivity_report(const FactorModel& f1, const FactorModel& f2,
                                             const std::vector<double>& d_list)
{
    std::vector<AdditivityRow> rows;
    bool degenerate = f1.entropy <= 0 || f2.entropy <= 0;
    for (double d : d_list) {
        DumbbellModel m =
            degenerate ? make_dumbbell(f1, f2, d) : make_balanced_dumbbell(f1, f2, d);
        if (degenerate) m.alpha = 0.0;
        AdditivityRow row;
        row.d = d;
        row.alpha = m.alpha;
        row.h_d = dumbbell_entropy_exact(m);
        row.gap = row.h_d - row.alpha;
        rows.push_back(row);
    }
    return rows;
}

} // namespace entx
