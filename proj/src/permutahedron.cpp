#include "entx/permutahedron.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "entx/rational.hpp"

namespace entx {

namespace {

long long factorial(int n)
{
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Largest possible sum of |w| coordinates: the top |w| values among 1..m+1.
long long top_sum(int m, int size)
{
    long long s = 0;
    for (int j = m + 2 - size; j <= m + 1; ++j) s += j;
    return s;
}

void enumerate_partitions(unsigned remaining, FaceBlocks& blocks,
                          const std::function<void(const FaceBlocks&)>& emit)
{
    if (remaining == 0) {
        emit(blocks);
        return;
    }
    // iterate nonempty submasks of `remaining` as the next block
    for (unsigned sub = remaining; sub; sub = (sub - 1) & remaining) {
        std::vector<int> block;
        for (int i = 0; i < 32; ++i)
            if (sub >> i & 1) block.push_back(i);
        blocks.push_back(block);
        enumerate_partitions(remaining & ~sub, blocks, emit);
        blocks.pop_back();
    }
}

// Barycenter of the face given by a permutation of positions and the set of
// kept block boundaries (partial-union sizes, subset of 1..m).
std::vector<double> chain_barycenter(int m, const std::vector<int>& pi,
                                     const std::vector<int>& boundaries)
{
    std::vector<double> x(m + 1, 0.0);
    std::vector<int> cuts = boundaries;
    cuts.push_back(m + 1);
    int prev = 0;
    for (int cut : cuts) {
        double avg = (2.0 * (m + 1) - 2.0 * prev - (cut - prev) + 1.0) / 2.0;
        for (int p = prev; p < cut; ++p) x[pi[p]] = avg;
        prev = cut;
    }
    return x;
}

double simplex_volume(const std::vector<std::vector<double>>& pts)
{
    const int m = static_cast<int>(pts.size()) - 1;
    std::vector<std::vector<double>> g(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (size_t c = 0; c < pts[0].size(); ++c)
                g[i][j] += (pts[i + 1][c] - pts[0][c]) * (pts[j + 1][c] - pts[0][c]);
    double det = 1.0; // Gaussian elimination
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(g[r][col]) > std::abs(g[piv][col])) piv = r;
        if (piv != col) {
            std::swap(g[piv], g[col]);
            det = -det;
        }
        if (g[col][col] == 0.0) return 0.0;
        det *= g[col][col];
        for (int r = col + 1; r < m; ++r) {
            double f = g[r][col] / g[col][col];
            for (int c = col; c < m; ++c) g[r][c] -= f * g[col][c];
        }
    }
    return std::sqrt(std::abs(det)) / static_cast<double>(factorial(m));
}

// Exact solve of a square rational system; returns false if singular.
bool rat_solve(std::vector<std::vector<Rat>> a, std::vector<Rat> b, std::vector<Rat>& out)
{
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, Rat(0));
    for (int i = 0; i < n; ++i) out[i] = b[i] / a[i][i];
    return true;
}

} // namespace

std::vector<double> Permutahedron::face_barycenter(const FaceBlocks& blocks) const
{
    std::vector<int> pi;
    std::vector<int> boundaries;
    int run = 0;
    for (size_t t = 0; t < blocks.size(); ++t) {
        for (int p : blocks[t]) pi.push_back(p);
        run += static_cast<int>(blocks[t].size());
        if (t + 1 < blocks.size()) boundaries.push_back(run);
    }
    return chain_barycenter(m, pi, boundaries);
}

Permutahedron build_permutahedron(int m)
{
    if (m < 1 || m > 5) throw std::invalid_argument("permutahedron: m must be in 1..5");
    Permutahedron P;
    P.m = m;
    std::vector<int> perm(m + 1);
    std::iota(perm.begin(), perm.end(), 1);
    do {
        P.vertices.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    const unsigned full = (1u << (m + 1)) - 1;
    std::vector<int> memberships(P.vertices.size(), 0);
    for (unsigned w = 1; w < full; ++w) {
        P.facet_masks.push_back(w);
        std::vector<int> verts;
        long long target = top_sum(m, std::popcount(w));
        for (size_t v = 0; v < P.vertices.size(); ++v) {
            long long s = 0;
            for (int i = 0; i <= m; ++i)
                if (w >> i & 1) s += P.vertices[v][i];
            if (s == target) {
                verts.push_back(static_cast<int>(v));
                ++memberships[v];
            }
        }
        P.facet_vertices.push_back(verts);
    }
    P.simple = std::all_of(memberships.begin(), memberships.end(),
                           [&](int c) { return c == m; });

    P.faces.assign(m + 1, {});
    FaceBlocks blocks;
    enumerate_partitions(full, blocks, [&](const FaceBlocks& f) {
        int dim = m + 1 - static_cast<int>(f.size());
        if (dim >= 0) P.faces[dim].push_back(f);
    });
    P.f_vector.clear();
    for (int k = 0; k <= m; ++k) P.f_vector.push_back(static_cast<long long>(P.faces[k].size()));
    return P;
}

bool truncation_equivalence(int m)
{
    if (m < 1 || m > 3) throw std::invalid_argument("truncation check: m must be in 1..3");
    Permutahedron P = build_permutahedron(m);

    // cutting planes sum_{i in w} x_i = 1 - (1/4)^{|w|} inside sum x_i = 1
    const unsigned full = (1u << (m + 1)) - 1;
    std::vector<unsigned> masks;
    std::vector<Rat> levels;
    for (unsigned w = 1; w < full; ++w) {
        masks.push_back(w);
        Rat quarter = 1;
        for (int i = 0; i < std::popcount(w); ++i) quarter /= 4;
        levels.push_back(1 - quarter);
    }
    // vertices: every feasible intersection of m cuts with the sum hyperplane
    std::map<std::vector<Rat>, std::vector<unsigned>> vertex_active;
    std::vector<int> pick(masks.size(), 0);
    std::function<void(size_t, std::vector<int>&)> choose = [&](size_t from,
                                                                std::vector<int>& chosen) {
        if (static_cast<int>(chosen.size()) == m) {
            std::vector<std::vector<Rat>> A(m + 1, std::vector<Rat>(m + 1, Rat(0)));
            std::vector<Rat> b(m + 1, Rat(0));
            for (int c = 0; c <= m; ++c) A[0][c] = 1;
            b[0] = 1;
            for (int r = 0; r < m; ++r) {
                unsigned w = masks[chosen[r]];
                for (int c = 0; c <= m; ++c) A[r + 1][c] = (w >> c & 1) ? 1 : 0;
                b[r + 1] = levels[chosen[r]];
            }
            std::vector<Rat> x;
            if (rat_solve(A, b, x)) {
                bool feasible = true;
                std::vector<unsigned> active;
                for (size_t i = 0; i < masks.size() && feasible; ++i) {
                    Rat s = 0;
                    for (int c = 0; c <= m; ++c)
                        if (masks[i] >> c & 1) s += x[c];
                    if (s > levels[i]) feasible = false;
                    if (s == levels[i]) active.push_back(masks[i]);
                }
                if (feasible) vertex_active[x] = active;
            }
            return;
        }
        for (size_t i = from; i < masks.size(); ++i) {
            chosen.push_back(static_cast<int>(i));
            choose(i + 1, chosen);
            chosen.pop_back();
        }
    };
    std::vector<int> chosen;
    choose(0, chosen);

    if (vertex_active.size() != P.vertices.size()) return false;
    // labeled incidence comparison: multiset of per-vertex facet sets
    std::vector<std::vector<unsigned>> trunc_sets, perm_sets;
    for (const auto& [x, act] : vertex_active) trunc_sets.push_back(act);
    for (size_t v = 0; v < P.vertices.size(); ++v) {
        std::vector<unsigned> act;
        for (size_t f = 0; f < P.facet_masks.size(); ++f) {
            const auto& fv = P.facet_vertices[f];
            if (std::find(fv.begin(), fv.end(), static_cast<int>(v)) != fv.end())
                act.push_back(P.facet_masks[f]);
        }
        perm_sets.push_back(act);
    }
    for (auto& s : trunc_sets) std::sort(s.begin(), s.end());
    for (auto& s : perm_sets) std::sort(s.begin(), s.end());
    std::sort(trunc_sets.begin(), trunc_sets.end());
    std::sort(perm_sets.begin(), perm_sets.end());
    return trunc_sets == perm_sets;
}

namespace {

// Runs `body` over every flag: a position ordering pi (full chain of partial
// unions) plus a removal order of the m chain elements; face k of the flag
// keeps the boundaries not yet removed.
void for_each_flag(int m, const std::function<void(const std::vector<int>& pi,
                                                   const std::vector<std::vector<int>>& kept)>& body)
{
    std::vector<int> pi(m + 1);
    std::iota(pi.begin(), pi.end(), 0);
    do {
        std::vector<int> removal(m);
        std::iota(removal.begin(), removal.end(), 1);
        do {
            std::vector<std::vector<int>> kept(m + 1);
            std::vector<int> current(removal.size());
            std::iota(current.begin(), current.end(), 1); // boundaries 1..m
            kept[0] = current;
            for (int k = 1; k <= m; ++k) {
                current.erase(std::find(current.begin(), current.end(), removal[k - 1]));
                kept[k] = current;
            }
            body(pi, kept);
        } while (std::next_permutation(removal.begin(), removal.end()));
    } while (std::next_permutation(pi.begin(), pi.end()));
}

} // namespace

double permutahedron_volume(int m)
{
    if (m < 1 || m > 5) throw std::invalid_argument("permutahedron volume: m must be in 1..5");
    double total = 0.0;
    for_each_flag(m, [&](const std::vector<int>& pi, const std::vector<std::vector<int>>& kept) {
        std::vector<std::vector<double>> pts;
        for (int k = 0; k <= m; ++k) pts.push_back(chain_barycenter(m, pi, kept[k]));
        total += simplex_volume(pts);
    });
    return total;
}

TomeiComplex build_tomei(int m)
{
    if (m < 1 || m > 4) throw std::invalid_argument("tomei: m must be in 1..4");
    TomeiComplex T;
    T.m = m;
    T.tile = build_permutahedron(m);
    T.num_cells = 1 << m;
    const int sheets = T.num_cells;

    // facet gluing: (s, F_w) <-> (s xor bit(|w|), F_w); check it is a
    // fixed-point-free involution covering every facet-cell exactly twice.
    T.gluing_involution_ok = true;
    std::map<std::pair<int, unsigned>, int> facet_use;
    for (int s = 0; s < sheets; ++s)
        for (unsigned w : T.tile.facet_masks) {
            int bit = 1 << (std::popcount(w) - 1);
            int partner = s ^ bit;
            if (partner == s || (partner ^ bit) != s) T.gluing_involution_ok = false;
            facet_use[{s, w}]++;
            facet_use[{partner, w}]++;
        }
    T.two_cells_per_facet_ok = true;
    for (const auto& [key, uses] : facet_use)
        if (uses != 2) T.two_cells_per_facet_ok = false;

    // k-cell orbits: sheets identified across every facet containing the face,
    // i.e. the subgroup generated by the bits of the partial-union sizes.
    auto orbit_count = [&](const FaceBlocks& blocks, std::vector<int>* reps = nullptr) {
        int gen = 0, run = 0;
        for (size_t t = 0; t + 1 < blocks.size(); ++t) {
            run += static_cast<int>(blocks[t].size());
            gen |= 1 << (run - 1);
        }
        // orbit of s under xor with any subset of `gen` bits
        std::vector<int> rep(sheets, -1);
        int orbits = 0;
        for (int s = 0; s < sheets; ++s) {
            int base = s & ~gen;
            if (rep[base] < 0) {
                rep[base] = orbits++;
                if (reps) reps->push_back(base);
            }
        }
        return orbits;
    };

    T.cell_counts.assign(m + 1, 0);
    for (int k = 0; k <= m; ++k)
        for (const auto& f : T.tile.faces[k]) T.cell_counts[k] += orbit_count(f);
    T.euler = 0;
    for (int k = 0; k <= m; ++k) T.euler += (k % 2 == 0 ? 1 : -1) * T.cell_counts[k];

    // 1-skeleton: vertex orbits are the tile vertices (all sheets identified);
    // each tile edge contributes one quotient edge per sheet orbit.
    std::map<std::vector<int>, int> vertex_index;
    for (size_t v = 0; v < T.tile.vertices.size(); ++v)
        vertex_index[T.tile.vertices[v]] = static_cast<int>(v);
    T.skeleton.num_vertices = static_cast<int>(T.tile.vertices.size());
    T.skeleton.basepoint = 0;
    auto perm_of = [&](const FaceBlocks& singletons) {
        std::vector<int> p(m + 1);
        for (size_t t = 0; t < singletons.size(); ++t)
            p[singletons[t][0]] = m + 1 - static_cast<int>(t);
        return p;
    };
    int edge_id = 0;
    for (const auto& f : T.tile.faces[1]) {
        // split the unique 2-block into its two orderings
        FaceBlocks a, b;
        for (const auto& blk : f) {
            if (blk.size() == 1) {
                a.push_back(blk);
                b.push_back(blk);
            } else {
                a.push_back({blk[0]});
                a.push_back({blk[1]});
                b.push_back({blk[1]});
                b.push_back({blk[0]});
            }
        }
        int u = vertex_index.at(perm_of(a));
        int v = vertex_index.at(perm_of(b));
        double len = 0;
        for (int i = 0; i <= m; ++i) {
            double d = T.tile.vertices[u][i] - T.tile.vertices[v][i];
            len += d * d;
        }
        len = std::sqrt(len);
        int orbits = orbit_count(f);
        for (int o = 0; o < orbits; ++o)
            T.skeleton.edges.push_back({"e" + std::to_string(edge_id++), u, v, len});
    }
    T.skeleton.check();

    // dual graph: one edge per gluing orbit {s, s xor bit(|w|)}
    for (unsigned w : T.tile.facet_masks) {
        int bit = 1 << (std::popcount(w) - 1);
        for (int s = 0; s < sheets; ++s)
            if (s < (s ^ bit)) T.dual_edges.push_back({s, s ^ bit});
    }
    return T;
}

double tomei_volume(int m)
{
    return static_cast<double>(1 << m) * permutahedron_volume(m);
}

EntropyEstimate tomei_entropy_estimate(int m, double t_max)
{
    if (m < 1 || m > 3)
        throw std::invalid_argument("tomei entropy: m must be in 1..3");
    TomeiComplex T = build_tomei(m);
    if (T.skeleton.fundamental_rank() <= 1) return entropy_perron(T.skeleton);
    OrbitCountOptions opts;
    opts.t_max = t_max;
    return entropy_orbit_count(T.skeleton, CoverSpec::trivial(), opts);
}

ConstantReport constants_report(int m, double t_max)
{
    ConstantReport r;
    r.m = m;
    r.v_m = permutahedron_volume(m);
    r.ent = tomei_entropy_estimate(m, t_max);
    r.c_prime = std::pow(r.ent.value, m) * r.v_m;
    r.c_factorial = std::pow(static_cast<double>(factorial(m)), 3) * r.c_prime;
    r.c_subdivision = std::pow(static_cast<double>(factorial(m + 1)), 3) * r.c_prime;
    return r;
}

std::vector<double> theta_map(const Permutahedron& P, const std::vector<double>& x)
{
    const int m = P.m;
    if (static_cast<int>(x.size()) != m + 1)
        throw std::invalid_argument("theta: point has wrong dimension");
    double plane = (m + 1) * (m + 2) / 2.0;
    double sum = std::accumulate(x.begin(), x.end(), 0.0);
    if (std::abs(sum - plane) > 1e-6)
        throw std::invalid_argument("theta: point off the defining hyperplane");
    for (unsigned w : P.facet_masks) {
        double s = 0;
        for (int i = 0; i <= m; ++i)
            if (w >> i & 1) s += x[i];
        if (s > top_sum(m, std::popcount(w)) + 1e-7)
            throw std::invalid_argument("theta: point outside the polytope");
    }

    double best_min = -1e30;
    std::vector<double> best_image;
    for_each_flag(m, [&](const std::vector<int>& pi, const std::vector<std::vector<int>>& kept) {
        std::vector<std::vector<double>> pts;
        for (int k = 0; k <= m; ++k) pts.push_back(chain_barycenter(m, pi, kept[k]));
        // barycentric coordinates by normal equations (rows: coords + sum = 1)
        const int n = m + 1;
        std::vector<std::vector<double>> ata(n, std::vector<double>(n, 0.0));
        std::vector<double> atb(n, 0.0);
        auto row = [&](const std::vector<double>& coeff, double rhs) {
            for (int i = 0; i < n; ++i) {
                atb[i] += coeff[i] * rhs;
                for (int j = 0; j < n; ++j) ata[i][j] += coeff[i] * coeff[j];
            }
        };
        for (int c = 0; c <= m; ++c) {
            std::vector<double> coeff(n);
            for (int k = 0; k < n; ++k) coeff[k] = pts[k][c];
            row(coeff, x[c]);
        }
        row(std::vector<double>(n, 1.0), 1.0);
        // solve ata * lambda = atb
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(ata[r][col]) > std::abs(ata[piv][col])) piv = r;
            std::swap(ata[col], ata[piv]);
            std::swap(atb[col], atb[piv]);
            if (std::abs(ata[col][col]) < 1e-14) return;
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                double f = ata[r][col] / ata[col][col];
                for (int c2 = col; c2 < n; ++c2) ata[r][c2] -= f * ata[col][c2];
                atb[r] -= f * atb[col];
            }
        }
        std::vector<double> lambda(n);
        double mn = 1e30;
        for (int k = 0; k < n; ++k) {
            lambda[k] = atb[k] / ata[k][k];
            mn = std::min(mn, lambda[k]);
        }
        if (mn <= best_min) return;
        // image vertices: barycenters of the simplex faces spanned by the
        // first (smallest kept boundary) positions of pi
        std::vector<double> img(m + 1, 0.0);
        for (int k = 0; k <= m; ++k) {
            int span = kept[k].empty() ? m + 1 : kept[k].front();
            for (int p = 0; p < span; ++p) img[pi[p]] += lambda[k] / span;
        }
        best_min = mn;
        best_image = img;
    });
    if (best_min < -1e-6 || best_image.empty())
        throw std::invalid_argument("theta: no containing flag simplex found");
    return best_image;
}

} // namespace entx
