#include "entx/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

namespace entx {

// ---------------------------------------------------------------------------
// non-backtracking operator

namespace {

// Vertices of the 2-core (iteratively strip degree-1 vertices).
std::vector<bool> two_core(const MetricGraph& g)
{
    std::vector<int> degree(g.num_vertices, 0);
    std::vector<bool> alive_edge(g.edges.size(), true);
    std::vector<bool> alive(g.num_vertices, true);
    for (const auto& e : g.edges) {
        degree[e.u]++;
        degree[e.v]++;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < g.num_vertices; ++v) {
            if (!alive[v] || degree[v] > 1) continue;
            alive[v] = false;
            changed = true;
            for (size_t i = 0; i < g.edges.size(); ++i) {
                if (!alive_edge[i]) continue;
                const auto& e = g.edges[i];
                if (e.u == v || e.v == v) {
                    alive_edge[i] = false;
                    degree[e.u]--;
                    degree[e.v]--;
                }
            }
        }
    }
    return alive;
}

} // namespace

NonBacktracking NonBacktracking::build(const MetricGraph& g)
{
    auto alive = two_core(g);
    NonBacktracking nb;
    // arc 2i = edge i forward (u->v), arc 2i+1 = backward
    std::vector<int> arc_of_edge(g.edges.size(), -1);
    std::vector<std::vector<int>> out(g.num_vertices); // arcs leaving a vertex
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (!alive[e.u] || !alive[e.v]) continue;
        arc_of_edge[i] = static_cast<int>(nb.arcs.size());
        nb.arcs.push_back({e.v, e.length, {}});
        nb.arcs.push_back({e.u, e.length, {}});
        out[e.u].push_back(arc_of_edge[i]);
        out[e.v].push_back(arc_of_edge[i] + 1);
    }
    for (size_t a = 0; a < nb.arcs.size(); ++a) {
        int rev = static_cast<int>(a) ^ 1;
        for (int b : out[nb.arcs[a].head_vertex])
            if (b != rev) nb.arcs[a].succ.push_back(b);
    }
    return nb;
}

namespace {

double power_iterate(const NonBacktracking& nb, double h, bool parallel)
{
    const int n = static_cast<int>(nb.arcs.size());
    if (n == 0) return 0.0;
    std::vector<double> w(n);
    for (int a = 0; a < n; ++a) w[a] = std::exp(-h * nb.arcs[a].length);

    std::vector<double> x(n, 1.0), y(n);
    double lo = 0.0, hi = 0.0;
    for (int iter = 0; iter < 200000; ++iter) {
        // y = x + B x  (the shift keeps the iteration aperiodic)
        if (parallel) {
#pragma omp parallel for schedule(static)
            for (int a = 0; a < n; ++a) {
                double acc = x[a];
                for (int b : nb.arcs[a].succ) acc += w[b] * x[b];
                y[a] = acc;
            }
        } else {
            for (int a = 0; a < n; ++a) {
                double acc = x[a];
                for (int b : nb.arcs[a].succ) acc += w[b] * x[b];
                y[a] = acc;
            }
        }
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (int a = 0; a < n; ++a) {
            double r = y[a] / x[a];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        double norm = 0.0;
        for (int a = 0; a < n; ++a) norm = std::max(norm, y[a]);
        for (int a = 0; a < n; ++a) x[a] = y[a] / norm;
        if (hi - lo <= 1e-12 * hi) break;
    }
    // Collatz-Wielandt: rho(I + B) lies in [lo, hi].
    return 0.5 * (lo + hi) - 1.0;
}

} // namespace

double NonBacktracking::spectral_radius(double h, bool parallel) const
{
    return power_iterate(*this, h, parallel);
}

double NonBacktracking::spectral_radius_serial(double h) const
{
    return power_iterate(*this, h, false);
}

EntropyEstimate entropy_perron(const MetricGraph& g)
{
    g.check();
    EntropyEstimate est;
    est.method = EntropyEstimate::Method::Perron;
    est.horizon = 1e-10;
    if (g.fundamental_rank() <= 1) return est; // trees and circles grow subexponentially

    NonBacktracking nb = NonBacktracking::build(g);
    if (nb.arcs.empty() || nb.spectral_radius(0.0) <= 1.0 + 1e-13) return est;

    double lo = 0.0, hi = 1.0;
    while (nb.spectral_radius(hi) > 1.0) hi *= 2.0;
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        (nb.spectral_radius(mid) > 1.0 ? lo : hi) = mid;
    }
    est.value = 0.5 * (lo + hi);
    est.lower = lo - 1e-10;
    est.upper = hi + 1e-10;
    return est;
}

// ---------------------------------------------------------------------------
// orbit counting

namespace {

std::vector<int> reduce_word(std::vector<int> w, const std::vector<int>& suffix)
{
    for (int letter : suffix) {
        if (!w.empty() && w.back() == -letter)
            w.pop_back();
        else if (letter != 0)
            w.push_back(letter);
    }
    return w;
}

std::vector<int> invert_word(const std::vector<int>& w)
{
    std::vector<int> inv(w.rbegin(), w.rend());
    for (int& l : inv) l = -l;
    return inv;
}

// Non-backtracking closed-path count DP over a quantized length grid.
// Lengths rounded down give an over-count, rounded up an under-count;
// together they bracket the true ball count.
std::vector<double> tree_orbit_counts(const MetricGraph& g, const std::vector<double>& t_grid,
                                      double delta, bool round_down)
{
    NonBacktracking nb = NonBacktracking::build(g);
    // In the 2-core the basepoint may have been stripped; orbit growth is
    // unaffected, use any core vertex as center then.
    int center = g.basepoint;
    bool center_alive = false;
    for (const auto& a : nb.arcs) center_alive |= a.head_vertex == center;
    if (!center_alive && !nb.arcs.empty()) center = nb.arcs[0].head_vertex;

    double t_max = t_grid.empty() ? 0.0 : t_grid.back();
    int bins = static_cast<int>(std::ceil(t_max / delta)) + 1;
    const int n = static_cast<int>(nb.arcs.size());
    std::vector<int> qlen(n);
    for (int a = 0; a < n; ++a) {
        double q = nb.arcs[a].length / delta;
        qlen[a] = std::max(1, round_down ? static_cast<int>(std::floor(q))
                                         : static_cast<int>(std::ceil(q)));
    }
    // paths[c][a]: number of non-backtracking paths from the center of
    // quantized length c ending with arc a.
    std::vector<std::vector<double>> paths(bins, std::vector<double>(n, 0.0));
    std::vector<double> closed(bins, 0.0); // paths returning to the center
    closed[0] = 1.0;                       // the identity lift
    for (int a = 0; a < n; ++a) {
        // arcs leaving the center: arc a leaves tail(a) = head(a^1)
        if (nb.arcs[a ^ 1].head_vertex == center && qlen[a] < bins)
            paths[qlen[a]][a] += 1.0;
    }
    for (int c = 0; c < bins; ++c) {
        for (int a = 0; a < n; ++a) {
            double cnt = paths[c][a];
            if (cnt == 0.0) continue;
            if (nb.arcs[a].head_vertex == center) closed[c] += cnt;
            for (int b : nb.arcs[a].succ) {
                int c2 = c + qlen[b];
                if (c2 < bins) paths[c2][b] += cnt;
            }
        }
    }
    std::vector<double> cumulative(bins, 0.0);
    double run = 0.0;
    for (int c = 0; c < bins; ++c) {
        run += closed[c];
        cumulative[c] = run;
    }
    std::vector<double> counts;
    for (double t : t_grid) {
        int c = std::min(bins - 1, static_cast<int>(std::floor(t / delta)));
        counts.push_back(cumulative[c]);
    }
    return counts;
}

// Dijkstra over an explicitly keyed cover; returns distances of basepoint lifts.
template <typename Key, typename Expand>
std::vector<double> cover_orbit_distances(const MetricGraph& g, double t_max, uint64_t budget,
                                          const Key& start, Expand&& expand)
{
    std::map<Key, double> dist;
    using QItem = std::pair<double, Key>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    dist[start] = 0.0;
    pq.push({0.0, start});
    std::vector<double> hits;
    while (!pq.empty()) {
        auto [d, key] = pq.top();
        pq.pop();
        auto it = dist.find(key);
        if (it == dist.end() || it->second < d) continue;
        if (key.first == g.basepoint) hits.push_back(d);
        expand(key, d, [&](const Key& next, double nd) {
            if (nd > t_max) return;
            auto [jt, inserted] = dist.try_emplace(next, nd);
            if (!inserted && jt->second <= nd) return;
            jt->second = nd;
            pq.push({nd, next});
        });
        if (dist.size() > budget)
            throw std::runtime_error("orbit count: state budget exceeded");
    }
    return hits;
}

struct SlopeFit {
    double slope = 0.0;
    double min_chord = 0.0;
    double max_chord = 0.0;
};

SlopeFit fit_slope(const std::vector<double>& t, const std::vector<double>& logn)
{
    SlopeFit f;
    size_t n = t.size();
    if (n < 2) return f;
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (size_t i = 0; i < n; ++i) {
        st += t[i];
        sl += logn[i];
        stt += t[i] * t[i];
        stl += t[i] * logn[i];
    }
    double denom = n * stt - st * st;
    f.slope = denom == 0 ? 0.0 : (n * stl - st * sl) / denom;
    f.min_chord = std::numeric_limits<double>::infinity();
    f.max_chord = -std::numeric_limits<double>::infinity();
    double chord = (logn.back() - logn.front()) / (t.back() - t.front());
    f.min_chord = std::min(f.min_chord, chord);
    f.max_chord = std::max(f.max_chord, chord);
    return f;
}

} // namespace

int free_quotient_image_rank(const MetricGraph& g, const CoverSpec& spec)
{
    if (spec.kind != CoverSpec::Kind::FreeQuotient)
        throw std::invalid_argument("image rank requires a free quotient spec");
    // Stallings folding of the voltage graph: subdivide each edge into its
    // letters, contract identity edges, fold repeatedly.
    struct LEdge {
        int u, v, letter;
    };
    std::vector<LEdge> ledges;
    int nv = g.num_vertices;
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    auto new_vertex = [&]() {
        parent.push_back(nv);
        return nv++;
    };
    for (const auto& e : g.edges) {
        std::vector<int> word;
        auto it = spec.words.find(e.name);
        if (it != spec.words.end()) word = it->second;
        if (word.empty()) {
            unite(e.u, e.v);
            continue;
        }
        int cur = e.u;
        for (size_t i = 0; i < word.size(); ++i) {
            int nxt = i + 1 == word.size() ? e.v : new_vertex();
            int l = word[i];
            if (l > 0)
                ledges.push_back({cur, nxt, l});
            else
                ledges.push_back({nxt, cur, -l});
            cur = nxt;
        }
    }
    // Fold to fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::tuple<int, int, int>, int> seen; // (vertex, letter, dir) -> other end
        for (auto& le : ledges) {
            int u = find(le.u), v = find(le.v);
            for (auto [from, to, dir] : {std::tuple{u, v, 0}, std::tuple{v, u, 1}}) {
                auto key = std::make_tuple(from, le.letter, dir);
                auto [it, inserted] = seen.try_emplace(key, to);
                if (!inserted && find(it->second) != find(to)) {
                    unite(it->second, to);
                    changed = true;
                }
            }
        }
    }
    // Count surviving vertices and deduplicated edges.
    std::map<std::tuple<int, int, int>, bool> edge_set;
    std::map<int, bool> vert_set;
    for (const auto& le : ledges) {
        int u = find(le.u), v = find(le.v);
        edge_set[{std::min(u, v), std::max(u, v), le.letter * (u <= v ? 1 : -1)}] = true;
        vert_set[u] = vert_set[v] = true;
    }
    for (int v = 0; v < g.num_vertices; ++v) vert_set[find(v)] = true;
    // The folded graph may have several components only if the original graph
    // did; g is connected, so it is connected.
    int E = static_cast<int>(edge_set.size());
    int V = static_cast<int>(vert_set.size());
    return E - V + 1;
}

EntropyEstimate entropy_orbit_count(const MetricGraph& g, const CoverSpec& spec,
                                    const OrbitCountOptions& opts, OrbitCountScan* scan)
{
    g.check();
    spec.check(g);
    double max_len = 0.0;
    for (const auto& e : g.edges) max_len = std::max(max_len, e.length);
    if (opts.t_max < 5.0 * max_len)
        throw std::invalid_argument("orbit count: t_max must be at least 5x the longest edge");

    EntropyEstimate est;
    est.method = EntropyEstimate::Method::OrbitCount;
    est.horizon = opts.t_max;

    std::vector<double> t_grid;
    for (int i = 1; i <= opts.grid_points; ++i)
        t_grid.push_back(opts.t_max * i / opts.grid_points);

    std::vector<double> counts_lo, counts_hi;

    bool tree_like = spec.kind == CoverSpec::Kind::Trivial;
    if (spec.kind == CoverSpec::Kind::FreeQuotient &&
        free_quotient_image_rank(g, spec) == g.fundamental_rank()) {
        tree_like = true; // trivial kernel: the cover is the universal cover
    }

    if (tree_like) {
        if (g.fundamental_rank() <= 1) {
            // Line or point cover: count lifts directly via Dijkstra on words.
            tree_like = false;
        }
    }

    if (tree_like) {
        double delta = std::min(0.002, opts.t_max * 1e-4);
        counts_hi = tree_orbit_counts(g, t_grid, delta, true);
        counts_lo = tree_orbit_counts(g, t_grid, delta, false);
    } else if (spec.kind == CoverSpec::Kind::FiniteQuotient ||
               spec.kind == CoverSpec::Kind::Trivial ||
               spec.kind == CoverSpec::Kind::FreeQuotient) {
        // Keyed Dijkstra over the cover; exact counts.
        using Key = std::pair<int, std::vector<int>>;
        Key start;
        std::vector<double> hits;
        if (spec.kind == CoverSpec::Kind::FiniteQuotient) {
            std::vector<int> ident(spec.degree);
            std::iota(ident.begin(), ident.end(), 0);
            start = {g.basepoint, ident};
            hits = cover_orbit_distances(
                g, opts.t_max, opts.state_budget, start,
                [&](const Key& key, double d, auto&& push) {
                    for (const auto& e : g.edges) {
                        std::vector<int> perm(spec.degree);
                        std::iota(perm.begin(), perm.end(), 0);
                        auto it = spec.perms.find(e.name);
                        if (it != spec.perms.end()) perm = it->second;
                        if (e.u == key.first || e.v == key.first) {
                            // forward traversal u->v composes the voltage,
                            // backward composes its inverse
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
                    }
                });
        } else {
            // Trivial on rank<=1 graphs, or free quotient with nontrivial
            // kernel: words over free generators (rank = graph rank for the
            // trivial case, labels one generator per edge).
            CoverSpec eff = spec;
            if (spec.kind == CoverSpec::Kind::Trivial) {
                eff.kind = CoverSpec::Kind::FreeQuotient;
                eff.free_rank = std::max<int>(1, g.edges.size());
                eff.words.clear();
                int gen = 1;
                for (const auto& e : g.edges) eff.words[e.name] = {gen++};
            }
            start = {g.basepoint, {}};
            hits = cover_orbit_distances(
                g, opts.t_max, opts.state_budget, start,
                [&](const Key& key, double d, auto&& push) {
                    for (const auto& e : g.edges) {
                        std::vector<int> word;
                        auto it = eff.words.find(e.name);
                        if (it != eff.words.end()) word = it->second;
                        if (e.u == key.first)
                            push({e.v, reduce_word(key.second, word)}, d + e.length);
                        if (e.v == key.first)
                            push({e.u, reduce_word(key.second, invert_word(word))}, d + e.length);
                    }
                });
        }
        std::sort(hits.begin(), hits.end());
        for (double t : t_grid) {
            double c = static_cast<double>(
                std::upper_bound(hits.begin(), hits.end(), t + 1e-12) - hits.begin());
            counts_lo.push_back(c);
            counts_hi.push_back(c);
        }
    }

    if (scan) {
        scan->t = t_grid;
        scan->count.clear();
        scan->slope_estimate.clear();
        for (size_t i = 0; i < t_grid.size(); ++i) {
            scan->count.push_back(static_cast<uint64_t>(
                std::min(counts_hi[i], 1.8e19)));
            scan->slope_estimate.push_back(i == 0 ? 0.0
                                                  : (std::log(std::max(1.0, counts_hi[i])) -
                                                     std::log(std::max(1.0, counts_hi[0]))) /
                                                        (t_grid[i] - t_grid[0]));
        }
    }

    // Regress log-counts over the top half of the horizon.
    std::vector<double> ts, lo_log, hi_log;
    for (size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < opts.t_max / 2) continue;
        if (counts_lo[i] < 1 || counts_hi[i] < 1) continue;
        ts.push_back(t_grid[i]);
        lo_log.push_back(std::log(counts_lo[i]));
        hi_log.push_back(std::log(counts_hi[i]));
    }
    if (ts.size() >= 2) {
        SlopeFit flo = fit_slope(ts, lo_log);
        SlopeFit fhi = fit_slope(ts, hi_log);
        est.value = 0.5 * (flo.slope + fhi.slope);
        double pad = 3.0 / opts.t_max;
        est.lower = std::max(0.0, std::min({flo.slope, flo.min_chord, fhi.slope}) - pad);
        est.upper = std::max({fhi.slope, fhi.max_chord, flo.slope}) + pad;
        est.value = std::clamp(est.value, est.lower, est.upper);
        if (est.value < 1e-9) est.value = std::max(0.0, est.value);
    }
    return est;
}

EntropyEstimate entropy_relative(const MetricGraph& g, const CoverSpec& spec)
{
    g.check();
    spec.check(g);
    switch (spec.kind) {
        case CoverSpec::Kind::FiniteQuotient: {
            EntropyEstimate est; // finite cover, bounded balls
            est.method = EntropyEstimate::Method::Perron;
            return est;
        }
        case CoverSpec::Kind::Trivial:
            return entropy_perron(g);
        case CoverSpec::Kind::FreeQuotient: {
            if (free_quotient_image_rank(g, spec) == g.fundamental_rank())
                return entropy_perron(g); // trivial kernel: same as universal cover
            // Nontrivial kernel: no exact finite automaton is available once
            // image cancellation collides orbit points; use orbit counting.
            OrbitCountOptions opts;
            double max_len = 0.0;
            for (const auto& e : g.edges) max_len = std::max(max_len, e.length);
            opts.t_max = std::max(25.0, 5.0 * max_len);
            OrbitCountScan scan;
            EntropyEstimate est = entropy_orbit_count(g, spec, opts, &scan);
            if (!scan.count.empty() &&
                static_cast<double>(scan.count.back()) < opts.t_max * opts.t_max) {
                est.value = 0.0; // subexponential cover growth
                est.lower = 0.0;
            }
            return est;
        }
    }
    return {};
}

double omega_value(const MetricGraph& g, const CoverSpec& spec)
{
    return entropy_relative(g, spec).value * g.total_length();
}

OmegaMinimum minimize_omega_lengths(const MetricGraph& topology, double total_length,
                                    uint32_t seed, int restarts)
{
    MetricGraph g = topology;
    g.check();
    const int ne = static_cast<int>(g.edges.size());
    std::mt19937 rng(seed);

    auto objective = [&](const std::vector<double>& lengths) {
        MetricGraph h = g;
        double sum = 0;
        for (int i = 0; i < ne; ++i) {
            h.edges[i].length = lengths[i];
            sum += lengths[i];
        }
        return entropy_perron(h).value * sum; // scale invariant
    };

    OmegaMinimum best;
    best.omega = std::numeric_limits<double>::infinity();

    for (int run = 0; run < restarts; ++run) {
        std::vector<double> lengths(ne, 1.0);
        if (run > 0) {
            std::uniform_real_distribution<double> u(0.2, 1.8);
            for (auto& l : lengths) l = u(rng);
        }
        double cur = objective(lengths);
        for (int pass = 0; pass < 40; ++pass) {
            double before = cur;
            for (int i = 0; i < ne; ++i) {
                // golden-section line search on edge i
                double a = 0.05, b = 8.0;
                const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
                double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
                auto eval = [&](double x) {
                    auto l = lengths;
                    l[i] = x;
                    return objective(l);
                };
                double f1 = eval(x1), f2 = eval(x2);
                for (int it = 0; it < 48; ++it) {
                    if (f1 < f2) {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - phi * (b - a);
                        f1 = eval(x1);
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + phi * (b - a);
                        f2 = eval(x2);
                    }
                }
                double xbest = 0.5 * (a + b);
                double fbest = eval(xbest);
                if (fbest < cur) {
                    lengths[i] = xbest;
                    cur = fbest;
                }
            }
            if (before - cur < 1e-10) break;
        }
        if (cur < best.omega) {
            best.omega = cur;
            best.lengths = lengths;
        }
    }
    // Normalize to the requested total.
    double sum = std::accumulate(best.lengths.begin(), best.lengths.end(), 0.0);
    for (auto& l : best.lengths) l *= total_length / sum;
    if (!std::isfinite(best.omega)) best.omega = 0.0;
    return best;
}

} // namespace entx
