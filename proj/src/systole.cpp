#include "entx/systole.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace entx {

namespace {

constexpr uint64_t kImageCap = 10'000'000;

std::array<int, 4> mat_mul(const std::array<int, 4>& x, const std::array<int, 4>& y, int n)
{
    return {(x[0] * y[0] + x[1] * y[2]) % n, (x[0] * y[1] + x[1] * y[3]) % n,
            (x[2] * y[0] + x[3] * y[2]) % n, (x[2] * y[1] + x[3] * y[3]) % n};
}

std::vector<int> perm_mul(const std::vector<int>& x, const std::vector<int>& y)
{
    std::vector<int> z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = y[x[i]];
    return z;
}

// Orbit enumeration of the image group; returns the right action of each
// generator on the element list (element 0 is the identity).
template <typename Elem, typename Mul>
std::vector<std::vector<int>> group_action(const Elem& identity, const std::vector<Elem>& gens,
                                           Mul&& mul)
{
    std::map<Elem, int> ids;
    std::vector<Elem> elems = {identity};
    ids[identity] = 0;
    for (size_t head = 0; head < elems.size(); ++head) {
        for (const Elem& g : gens) {
            Elem next = mul(elems[head], g);
            if (ids.emplace(next, static_cast<int>(elems.size())).second)
                elems.push_back(next);
        }
        if (elems.size() > kImageCap) throw std::runtime_error("marked group: image too large");
    }
    std::vector<std::vector<int>> action(elems.size(), std::vector<int>(gens.size()));
    for (size_t e = 0; e < elems.size(); ++e)
        for (size_t g = 0; g < gens.size(); ++g) action[e][g] = ids.at(mul(elems[e], gens[g]));
    return action;
}

} // namespace

void MarkedGroup::check() const
{
    if (rank < 1) throw std::invalid_argument("marked group: rank must be positive");
    if (backend == Backend::Permutation) {
        if (static_cast<int>(perm_images.size()) != rank)
            throw std::invalid_argument("marked group: one permutation per generator required");
        for (const auto& p : perm_images) {
            std::vector<int> seen(p.size(), 0);
            for (int v : p) {
                if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]++)
                    throw std::invalid_argument("marked group: image is not a permutation");
            }
        }
    } else if (backend == Backend::Matrix) {
        if (mod < 2) throw std::invalid_argument("marked group: modulus must be at least 2");
        if (static_cast<int>(matrix_images.size()) != rank)
            throw std::invalid_argument("marked group: one matrix per generator required");
        for (const auto& m : matrix_images) {
            int det = ((m[0] * m[3] - m[1] * m[2]) % mod + mod) % mod;
            if (det != 1)
                throw std::invalid_argument("marked group: matrix image must have determinant 1");
        }
    }
}

MarkedGroup make_free_group(int rank)
{
    MarkedGroup g;
    g.backend = MarkedGroup::Backend::Free;
    g.rank = rank;
    g.check();
    return g;
}

MarkedGroup make_sl2_mod(int n)
{
    MarkedGroup g;
    g.backend = MarkedGroup::Backend::Matrix;
    g.rank = 2;
    g.mod = n;
    g.matrix_images = {{1, 2 % n, 0, 1}, {1, 0, 2 % n, 1}};
    g.check();
    return g;
}

MarkedGroup make_abelianized_mod2()
{
    MarkedGroup g;
    g.backend = MarkedGroup::Backend::Permutation;
    g.rank = 2;
    g.perm_images = {{1, 0, 3, 2}, {2, 3, 0, 1}};
    g.check();
    return g;
}

SchreierGraph schreier_graph(const MarkedGroup& g, const SubgroupSpec& sub)
{
    g.check();
    SchreierGraph s;
    s.rank = g.rank;
    std::vector<std::vector<int>> action;
    switch (sub.kind) {
    case SubgroupSpec::Kind::WholeGroup:
        action.assign(1, std::vector<int>(g.rank, 0));
        break;
    case SubgroupSpec::Kind::CosetTable:
        if (static_cast<int>(sub.coset_action.size()) != g.rank)
            throw std::invalid_argument("coset table: one permutation per generator required");
        for (const auto& row : sub.coset_action)
            if (row.size() != sub.coset_action[0].size())
                throw std::invalid_argument("coset table: permutations must have equal size");
        // rows are per generator: transpose to per coset
        action.assign(sub.coset_action[0].size(), std::vector<int>(g.rank));
        for (int gen = 0; gen < g.rank; ++gen)
            for (size_t c = 0; c < sub.coset_action[gen].size(); ++c)
                action[c][gen] = sub.coset_action[gen][c];
        break;
    case SubgroupSpec::Kind::MarkingKernel:
        if (g.backend == MarkedGroup::Backend::Free) {
            action.assign(1, std::vector<int>(g.rank, 0)); // trivial image
        } else if (g.backend == MarkedGroup::Backend::Permutation) {
            std::vector<int> identity(g.perm_images[0].size());
            std::iota(identity.begin(), identity.end(), 0);
            action = group_action(identity, g.perm_images, perm_mul);
        } else {
            std::array<int, 4> identity = {1, 0, 0, 1};
            action = group_action(identity, g.matrix_images,
                                  [&](const auto& x, const auto& y) { return mat_mul(x, y, g.mod); });
        }
        break;
    }
    s.index = static_cast<int>(action.size());
    s.next = action;
    s.prev.assign(s.index, std::vector<int>(g.rank, -1));
    for (int c = 0; c < s.index; ++c)
        for (int gen = 0; gen < g.rank; ++gen) {
            if (s.next[c][gen] < 0 || s.next[c][gen] >= s.index)
                throw std::invalid_argument("coset action out of range");
            s.prev[s.next[c][gen]][gen] = c;
        }
    for (int c = 0; c < s.index; ++c)
        for (int gen = 0; gen < g.rank; ++gen)
            if (s.prev[c][gen] < 0)
                throw std::invalid_argument("coset action is not a permutation");
    return s;
}

int cayley_systole(const MarkedGroup& g, const SubgroupSpec& sub)
{
    SchreierGraph s = schreier_graph(g, sub);
    if (sub.kind == SubgroupSpec::Kind::WholeGroup || s.index == 1) return 1;
    // BFS over (coset, last signed letter) along reduced words from the base;
    // a reduced word is automatically nontrivial in the free group.
    struct State {
        int coset;
        int last; // signed generator, 1-based
        int depth;
    };
    std::deque<State> queue;
    std::map<std::pair<int, int>, int> seen;
    for (int gen = 0; gen < g.rank; ++gen) {
        for (int sign : {+1, -1}) {
            int to = sign > 0 ? s.next[s.base][gen] : s.prev[s.base][gen];
            if (to == s.base) return 1;
            int letter = sign * (gen + 1);
            if (seen.emplace(std::pair{to, letter}, 1).second) queue.push_back({to, letter, 1});
        }
    }
    while (!queue.empty()) {
        State st = queue.front();
        queue.pop_front();
        for (int gen = 0; gen < g.rank; ++gen) {
            for (int sign : {+1, -1}) {
                int letter = sign * (gen + 1);
                if (letter == -st.last) continue; // keep the word reduced
                int to = sign > 0 ? s.next[st.coset][gen] : s.prev[st.coset][gen];
                if (to == s.base) return st.depth + 1;
                if (seen.emplace(std::pair{to, letter}, 1).second)
                    queue.push_back({to, letter, st.depth + 1});
            }
        }
    }
    throw std::runtime_error("systole: no reduced loop found"); // unreachable for rank >= 1
}

namespace {

// Dijkstra between lifts of the same base vertex in an explicit finite cover.
double finite_cover_systole(const MetricGraph& G, const CoverSpec& spec)
{
    const int deg = spec.degree;
    const int n = G.num_vertices * deg;
    auto id = [&](int v, int sheet) { return v * deg + sheet; };
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : G.edges) {
        std::vector<int> perm(deg);
        std::iota(perm.begin(), perm.end(), 0);
        auto it = spec.perms.find(e.name);
        if (it != spec.perms.end()) perm = it->second;
        for (int s = 0; s < deg; ++s) {
            adj[id(e.u, s)].push_back({id(e.v, perm[s]), e.length});
            adj[id(e.v, perm[s])].push_back({id(e.u, s), e.length});
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (int v = 0; v < G.num_vertices; ++v) {
        for (int s0 = 0; s0 < deg; ++s0) {
            std::vector<double> dist(n, std::numeric_limits<double>::infinity());
            std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                                std::greater<>>
                pq;
            dist[id(v, s0)] = 0.0;
            pq.push({0.0, id(v, s0)});
            while (!pq.empty()) {
                auto [d, u] = pq.top();
                pq.pop();
                if (d > dist[u] || d >= best) continue;
                for (auto [w, len] : adj[u]) {
                    if (d + len < dist[w]) {
                        dist[w] = d + len;
                        pq.push({d + len, w});
                    }
                }
            }
            for (int s1 = 0; s1 < deg; ++s1)
                if (s1 != s0) best = std::min(best, dist[id(v, s1)]);
        }
    }
    return best;
}

// Shortest cycle of the metric graph (loops and parallel edges included).
double metric_girth(const MetricGraph& G)
{
    double best = std::numeric_limits<double>::infinity();
    for (size_t skip = 0; skip < G.edges.size(); ++skip) {
        const auto& e = G.edges[skip];
        if (e.u == e.v) {
            best = std::min(best, e.length);
            continue;
        }
        std::vector<double> dist(G.num_vertices, std::numeric_limits<double>::infinity());
        std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                            std::greater<>>
            pq;
        dist[e.u] = 0.0;
        pq.push({0.0, e.u});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            for (size_t i = 0; i < G.edges.size(); ++i) {
                if (i == skip) continue;
                const auto& f = G.edges[i];
                for (auto [a, b] : {std::pair{f.u, f.v}, std::pair{f.v, f.u}}) {
                    if (a != u) continue;
                    if (d + f.length < dist[b]) {
                        dist[b] = d + f.length;
                        pq.push({d + f.length, b});
                    }
                }
            }
        }
        best = std::min(best, dist[e.v] + e.length);
    }
    return best;
}

std::vector<int> word_append(std::vector<int> w, const std::vector<int>& suffix, bool invert)
{
    auto push = [&](int letter) {
        if (letter == 0) return;
        if (!w.empty() && w.back() == -letter)
            w.pop_back();
        else
            w.push_back(letter);
    };
    if (invert)
        for (auto it = suffix.rbegin(); it != suffix.rend(); ++it) push(-*it);
    else
        for (int l : suffix) push(l);
    return w;
}

double free_cover_systole(const MetricGraph& G, const CoverSpec& spec, uint64_t budget)
{
    const double cutoff = 2.0 * G.total_length() + 1e-9;
    double best = std::numeric_limits<double>::infinity();
    using Key = std::pair<int, std::vector<int>>;
    for (int v0 = 0; v0 < G.num_vertices; ++v0) {
        std::map<Key, double> dist;
        std::priority_queue<std::pair<double, Key>, std::vector<std::pair<double, Key>>,
                            std::greater<>>
            pq;
        Key start{v0, {}};
        dist[start] = 0.0;
        pq.push({0.0, start});
        while (!pq.empty()) {
            auto [d, key] = pq.top();
            pq.pop();
            auto it = dist.find(key);
            if (it->second < d || d >= best) continue;
            if (key.first == v0 && !key.second.empty()) {
                best = std::min(best, d);
                continue;
            }
            for (const auto& e : G.edges) {
                std::vector<int> word;
                auto wit = spec.words.find(e.name);
                if (wit != spec.words.end()) word = wit->second;
                for (bool rev : {false, true}) {
                    int from = rev ? e.v : e.u;
                    int to = rev ? e.u : e.v;
                    if (from != key.first) continue;
                    double nd = d + e.length;
                    if (nd > cutoff) continue;
                    Key next{to, word_append(key.second, word, rev)};
                    auto [jt, inserted] = dist.try_emplace(next, nd);
                    if (!inserted && jt->second <= nd) continue;
                    jt->second = nd;
                    pq.push({nd, next});
                }
            }
            if (dist.size() > budget)
                throw std::runtime_error("graph systole: state budget exceeded");
        }
    }
    return best;
}

} // namespace

double graph_systole_essential(const MetricGraph& G, const CoverSpec& spec, uint64_t state_budget)
{
    G.check();
    spec.check(G);
    switch (spec.kind) {
    case CoverSpec::Kind::Trivial:
        return metric_girth(G);
    case CoverSpec::Kind::FiniteQuotient:
        if (static_cast<uint64_t>(G.num_vertices) * spec.degree > state_budget)
            throw std::runtime_error("graph systole: state budget exceeded");
        return finite_cover_systole(G, spec);
    case CoverSpec::Kind::FreeQuotient:
        return free_cover_systole(G, spec, state_budget);
    }
    return std::numeric_limits<double>::infinity();
}

namespace {

// least squares sys = c log k + b over the scan rows
void fit_log_slope(SystoleScan& scan)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(scan.rows.size());
    for (const auto& r : scan.rows) {
        double x = std::log(static_cast<double>(r.k));
        sx += x;
        sy += r.sys;
        sxx += x * x;
        sxy += x * r.sys;
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) > 1e-12) {
        scan.fit_c = (n * sxy - sx * sy) / denom;
        scan.fit_intercept = (sy - scan.fit_c * sx) / n;
    }
    for (const auto& r : scan.rows) {
        double fitted = scan.fit_c * std::log(static_cast<double>(r.k)) + scan.fit_intercept;
        scan.max_abs_residual = std::max(scan.max_abs_residual, std::abs(r.sys - fitted));
    }
}

} // namespace

SystoleScan sigma_scan_multiples(const MarkedGroup& g, const std::vector<SubgroupSpec>& family,
                                 int m)
{
    SystoleScan scan;
    scan.m = m;
    for (const auto& sub : family) {
        SystoleScan::Row row;
        row.k = schreier_graph(g, sub).index;
        row.sys = cayley_systole(g, sub);
        row.vol = static_cast<double>(row.k) * g.rank;
        row.ratio = row.vol / std::pow(static_cast<double>(row.sys), m);
        scan.rows.push_back(row);
    }
    for (size_t i = 1; i < scan.rows.size(); ++i)
        if (scan.rows[i].k < scan.rows[i - 1].k)
            throw std::invalid_argument("systole scan: family must have increasing index");
    fit_log_slope(scan);
    return scan;
}

SystoleScan sl2_family_scan(const std::vector<int>& primes, int m)
{
    SystoleScan scan;
    scan.m = m;
    std::vector<SystoleScan::Row> rows;
    for (int p : primes) {
        MarkedGroup g = make_sl2_mod(p);
        SystoleScan partial = sigma_scan_multiples(g, {SubgroupSpec::kernel()}, m);
        rows.push_back(partial.rows.at(0));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    SystoleScan merged;
    merged.m = m;
    merged.rows = rows;
    fit_log_slope(merged);
    return merged;
}

double GrowthProfile::operator()(double k) const
{
    if (linear) return k;
    return k / std::pow(std::log(k), m);
}

double stabilized_seminorm(const std::vector<std::pair<int, double>>& samples,
                           const GrowthProfile& h)
{
    if (samples.size() < 4)
        throw std::invalid_argument("seminorm estimate: at least 4 samples required");
    for (const auto& [k, rho] : samples)
        if (k < 2) throw std::invalid_argument("seminorm estimate: samples need k >= 2");
    std::vector<std::pair<int, double>> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    double best = 0.0;
    for (size_t i = sorted.size() / 2; i < sorted.size(); ++i)
        best = std::max(best, sorted[i].second / h(static_cast<double>(sorted[i].first)));
    return best;
}

} // namespace entx
