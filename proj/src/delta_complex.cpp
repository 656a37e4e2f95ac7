#include "entx/delta_complex.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "entx/ratmat.hpp"

namespace entx {

DeltaComplex::DeltaComplex(int dimension) : dim_(dimension), by_dim_(dimension + 1) {}

const std::vector<DeltaComplex::Simplex>& DeltaComplex::simplices(int k) const
{
    static const std::vector<Simplex> empty;
    if (k < 0 || k > dim_) return empty;
    return by_dim_[k];
}

int DeltaComplex::count(int k) const { return static_cast<int>(simplices(k).size()); }

int DeltaComplex::add_vertex() { return add_simplex_with_id(0, next_id_, {}); }

int DeltaComplex::add_simplex(int k, const std::vector<int>& face_ids)
{
    return add_simplex_with_id(k, next_id_, face_ids);
}

int DeltaComplex::add_simplex_with_id(int k, int id, const std::vector<int>& face_ids)
{
    if (k < 0 || k > dim_)
        throw std::invalid_argument("simplex dimension out of range: " + std::to_string(k));
    if (k >= 1 && static_cast<int>(face_ids.size()) != k + 1)
        throw std::invalid_argument("simplex " + std::to_string(id) + ": expected " +
                                    std::to_string(k + 1) + " faces");
    for (int f : face_ids) {
        if (!has_simplex(f))
            throw std::invalid_argument("simplex " + std::to_string(id) +
                                        ": face out of range: " + std::to_string(f));
        if (simplex_dim(f) != k - 1)
            throw std::invalid_argument("simplex " + std::to_string(id) +
                                        ": face has wrong dimension: " + std::to_string(f));
    }
    if (id >= static_cast<int>(index_.size())) index_.resize(id + 1, {-1, -1});
    if (index_[id].first != -1)
        throw std::invalid_argument("duplicate simplex id: " + std::to_string(id));
    index_[id] = {k, static_cast<int>(by_dim_[k].size())};
    by_dim_[k].push_back({id, face_ids});
    next_id_ = std::max(next_id_, id + 1);
    return id;
}

bool DeltaComplex::has_simplex(int id) const
{
    return id >= 0 && id < static_cast<int>(index_.size()) && index_[id].first != -1;
}

int DeltaComplex::simplex_dim(int id) const
{
    if (!has_simplex(id))
        throw std::invalid_argument("no such simplex: " + std::to_string(id));
    return index_[id].first;
}

const DeltaComplex::Simplex& DeltaComplex::simplex(int id) const
{
    auto [k, pos] = index_.at(id);
    if (k < 0) throw std::invalid_argument("no such simplex: " + std::to_string(id));
    return by_dim_[k][pos];
}

void DeltaComplex::validate() const
{
    // Simplicial identity d_i d_j = d_{j-1} d_i for i < j, checked on ids.
    for (int k = 2; k <= dim_; ++k) {
        for (const Simplex& s : by_dim_[k]) {
            for (int j = 1; j <= k; ++j) {
                for (int i = 0; i < j; ++i) {
                    int left = simplex(s.faces[j]).faces[i];
                    int right = simplex(s.faces[i]).faces[j - 1];
                    if (left != right)
                        throw std::invalid_argument(
                            "simplicial identity fails at simplex " + std::to_string(s.id) +
                            " (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// parsing

DeltaComplex parse_complex(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int dim = -1;
    DeltaComplex X(0);
    bool have_dim = false;

    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "dim") {
            if (!(ls >> dim) || dim < 0) fail("bad dimension");
            X = DeltaComplex(dim);
            have_dim = true;
        } else if (kw == "vertex") {
            if (!have_dim) fail("vertex before dim");
            int id;
            if (!(ls >> id)) fail("bad vertex id");
            try {
                X.add_simplex_with_id(0, id, {});
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        } else if (kw == "simplex") {
            if (!have_dim) fail("simplex before dim");
            int k, id;
            std::string colon;
            if (!(ls >> k >> id >> colon) || colon != ":") fail("expected `simplex <k> <id> :`");
            std::vector<int> faces;
            int f;
            while (ls >> f) faces.push_back(f);
            try {
                X.add_simplex_with_id(k, id, faces);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        } else {
            fail("unknown keyword: " + kw);
        }
    }
    if (!have_dim) throw std::invalid_argument("missing `dim` line");
    X.validate();
    return X;
}

std::string export_complex(const DeltaComplex& X)
{
    std::ostringstream out;
    out << "dim " << X.dimension() << "\n";
    for (const auto& v : X.simplices(0)) out << "vertex " << v.id << "\n";
    for (int k = 1; k <= X.dimension(); ++k) {
        for (const auto& s : X.simplices(k)) {
            out << "simplex " << k << " " << s.id << " :";
            for (int f : s.faces) out << " " << f;
            out << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// boundary and homology

Chain boundary(const Chain& c, const DeltaComplex& X)
{
    if (c.degree() < 1) throw std::invalid_argument("boundary: degree must be >= 1");
    Chain out(c.degree() - 1);
    for (const auto& [id, coeff] : c.entries()) {
        if (X.simplex_dim(id) != c.degree())
            throw std::invalid_argument("boundary: chain degree mismatch at simplex " +
                                        std::to_string(id));
        const auto& s = X.simplex(id);
        Rat sign = 1;
        for (int f : s.faces) {
            out.add(f, sign * coeff);
            sign = -sign;
        }
    }
    return out;
}

static RatMatrix boundary_matrix(const DeltaComplex& X, int k,
                                 std::map<int, int>& row_of, std::map<int, int>& col_of)
{
    const auto& lo = X.simplices(k - 1);
    const auto& hi = X.simplices(k);
    for (size_t i = 0; i < lo.size(); ++i) row_of[lo[i].id] = static_cast<int>(i);
    for (size_t i = 0; i < hi.size(); ++i) col_of[hi[i].id] = static_cast<int>(i);
    RatMatrix m(static_cast<int>(lo.size()), static_cast<int>(hi.size()));
    for (size_t c = 0; c < hi.size(); ++c) {
        Rat sign = 1;
        for (int f : hi[c].faces) {
            m.at(row_of[f], static_cast<int>(c)) += sign;
            sign = -sign;
        }
    }
    return m;
}

HomologyResult homology_rank(const DeltaComplex& X, int k)
{
    if (k < 0 || k > X.dimension())
        throw std::invalid_argument("homology degree out of range");
    HomologyResult res;
    const auto& sims = X.simplices(k);
    int n = static_cast<int>(sims.size());
    if (n == 0) return res;

    // Kernel of d_k (all of C_k when k = 0).
    std::vector<std::vector<Rat>> cycles;
    if (k == 0) {
        for (int i = 0; i < n; ++i) {
            std::vector<Rat> e(n, Rat(0));
            e[i] = 1;
            cycles.push_back(std::move(e));
        }
    } else {
        std::map<int, int> r, c;
        cycles = rat_kernel(boundary_matrix(X, k, r, c));
    }

    // Image basis of d_{k+1} as column vectors.
    std::vector<std::vector<Rat>> image;
    if (k + 1 <= X.dimension()) {
        std::map<int, int> r, c;
        RatMatrix b = boundary_matrix(X, k + 1, r, c);
        std::vector<int> col_pivots; // pivot columns index independent columns of b
        rat_rank(b, &col_pivots);
        for (int c2 : col_pivots) {
            std::vector<Rat> v(n, Rat(0));
            for (int i = 0; i < b.rows; ++i) v[i] = b.at(i, c2);
            image.push_back(std::move(v));
        }
    }

    // Greedy rank extension: keep cycles independent modulo the image.
    RatMatrix acc(n, static_cast<int>(image.size() + cycles.size()));
    int used = 0;
    for (const auto& v : image) {
        for (int i = 0; i < n; ++i) acc.at(i, used) = v[i];
        ++used;
    }
    int rank = used == 0 ? 0 : rat_rank(acc);
    for (const auto& v : cycles) {
        for (int i = 0; i < n; ++i) acc.at(i, used) = v[i];
        RatMatrix trial = acc;
        trial.cols = used + 1;
        for (auto& row : trial.a) row.resize(used + 1);
        int r2 = rat_rank(trial);
        if (r2 > rank) {
            rank = r2;
            ++used;
            Chain rep(k);
            for (int i = 0; i < n; ++i) rep.set(sims[i].id, v[i]);
            res.cycle_basis.push_back(std::move(rep));
        }
    }
    res.betti = static_cast<int>(res.cycle_basis.size());
    return res;
}

// ---------------------------------------------------------------------------
// pseudomanifold conditions

PseudomanifoldReport check_pseudomanifold(const DeltaComplex& X)
{
    PseudomanifoldReport rep;
    int m = X.dimension();
    const auto& tops = X.simplices(m);

    if (m == 0) {
        rep.is_pseudomanifold = X.count(0) == 1;
        if (!rep.is_pseudomanifold && X.count(0) > 1)
            rep.failures.push_back({"P3", X.simplices(0)[1].id});
        if (rep.is_pseudomanifold) {
            rep.orientable = true;
            Chain z(0);
            z.set(tops[0].id, 1);
            rep.fundamental_cycle = z;
        }
        return rep;
    }

    // P1: every simplex is an iterated face of a top simplex.
    std::vector<bool> reached(X.next_id(), false);
    std::queue<int> q;
    for (const auto& t : tops) {
        reached[t.id] = true;
        q.push(t.id);
    }
    while (!q.empty()) {
        int id = q.front();
        q.pop();
        for (int f : X.simplex(id).faces) {
            if (!reached[f]) {
                reached[f] = true;
                q.push(f);
            }
        }
    }
    for (int k = 0; k < m; ++k)
        for (const auto& s : X.simplices(k))
            if (!reached[s.id]) rep.failures.push_back({"P1", s.id});

    // P2: every facet incident to exactly two (top simplex, face slot) pairs,
    // counting multiplicity (a loop edge counts its vertex twice).
    std::map<int, std::vector<std::pair<int, int>>> slots; // facet -> (top index, slot)
    for (size_t t = 0; t < tops.size(); ++t)
        for (size_t i = 0; i < tops[t].faces.size(); ++i)
            slots[tops[t].faces[i]].push_back({static_cast<int>(t), static_cast<int>(i)});
    for (const auto& f : X.simplices(m - 1)) {
        auto it = slots.find(f.id);
        size_t deg = it == slots.end() ? 0 : it->second.size();
        if (deg != 2) rep.failures.push_back({"P2", f.id});
    }

    // P3: facet-adjacency connectivity of top simplices.
    if (!tops.empty()) {
        std::vector<int> comp(tops.size(), -1);
        std::queue<int> bfs;
        bfs.push(0);
        comp[0] = 0;
        while (!bfs.empty()) {
            int t = bfs.front();
            bfs.pop();
            for (int f : tops[t].faces) {
                for (auto [u, slot] : slots[f]) {
                    (void)slot;
                    if (comp[u] < 0) {
                        comp[u] = 0;
                        bfs.push(u);
                    }
                }
            }
        }
        for (size_t t = 0; t < tops.size(); ++t)
            if (comp[t] < 0) rep.failures.push_back({"P3", tops[t].id});
    }

    rep.is_pseudomanifold = rep.failures.empty() && !tops.empty();
    if (!rep.is_pseudomanifold) return rep;

    // Orientation: propagate signs across shared facets. Each facet has two
    // incident slots; the two induced boundary coefficients must cancel.
    std::vector<int> sign(tops.size(), 0);
    bool ok = true;
    sign[0] = 1;
    std::queue<int> prop;
    prop.push(0);
    auto slot_sign = [](int slot) { return slot % 2 == 0 ? 1 : -1; };
    while (!prop.empty() && ok) {
        int t = prop.front();
        prop.pop();
        for (size_t i = 0; i < tops[t].faces.size() && ok; ++i) {
            const auto& pair = slots[tops[t].faces[i]];
            for (auto [u, j] : pair) {
                if (u == t && static_cast<size_t>(j) == i) continue;
                // want sign[t]*(-1)^i + sign[u]*(-1)^j == 0
                int needed = -sign[t] * slot_sign(static_cast<int>(i)) * slot_sign(j);
                if (u == t && static_cast<size_t>(j) != i) {
                    if (needed != sign[t]) ok = false;
                } else if (sign[u] == 0) {
                    sign[u] = needed;
                    prop.push(u);
                } else if (sign[u] != needed) {
                    ok = false;
                }
            }
        }
    }
    rep.orientable = ok;
    if (ok) {
        Chain z(m);
        for (size_t t = 0; t < tops.size(); ++t) z.set(tops[t].id, sign[t]);
        rep.fundamental_cycle = z;
    }
    return rep;
}

bool orientation_double_check(const DeltaComplex& X)
{
    return check_pseudomanifold(X).orientable;
}

// ---------------------------------------------------------------------------
// barycentric subdivision

namespace {

using Mask = uint32_t;

// Face of `id` spanned by vertex-index subset S (as a bitmask over 0..k).
int subface(const DeltaComplex& X, int id, Mask s, int k)
{
    int cur = id;
    for (int j = k; j >= 0; --j) {
        if (!(s & (Mask(1) << j))) cur = X.simplex(cur).faces[j];
    }
    return cur;
}

// Relabel subset `s` through the order isomorphism of `within` onto
// {0..popcount(within)-1}.
Mask relabel(Mask s, Mask within)
{
    Mask out = 0;
    int pos = 0;
    for (int i = 0; i < 32; ++i) {
        if (!(within & (Mask(1) << i))) continue;
        if (s & (Mask(1) << i)) out |= Mask(1) << pos;
        ++pos;
    }
    return out;
}

} // namespace

DeltaComplex barycentric_subdivide(const DeltaComplex& X)
{
    int m = X.dimension();
    DeltaComplex out(m);

    // Per old simplex: chains of subsets with full top -> new simplex id.
    // A chain of length j+1 is a j-simplex of the subdivision whose vertices
    // are the barycenters of the nested faces.
    std::vector<std::map<std::vector<Mask>, int>> table(X.next_id());

    // Barycenter vertices, one per old simplex, dimension order.
    for (int k = 0; k <= m; ++k) {
        for (const auto& s : X.simplices(k)) {
            Mask full = (Mask(1) << (k + 1)) - 1;
            table[s.id][{full}] = out.add_vertex();
        }
    }

    std::function<int(int, int, const std::vector<Mask>&)> lookup =
        [&](int id, int k, const std::vector<Mask>& chain) -> int {
        Mask full = (Mask(1) << (k + 1)) - 1;
        if (chain.back() == full) return table[id].at(chain);
        // Chain lives in a proper face; relabel and recurse.
        Mask top = chain.back();
        int face_id = subface(X, id, top, k);
        int face_dim = X.simplex_dim(face_id);
        std::vector<Mask> rel;
        rel.reserve(chain.size());
        for (Mask s : chain) rel.push_back(relabel(s, top));
        return lookup(face_id, face_dim, rel);
    };

    // Enumerate chains by increasing length so faces exist before cofaces.
    for (int len = 2; len <= m + 1; ++len) {
        for (int k = len - 1; k <= m; ++k) {
            Mask full = (Mask(1) << (k + 1)) - 1;
            for (const auto& s : X.simplices(k)) {
                // All strictly increasing chains S_0 < ... < S_{len-1} = full.
                std::vector<Mask> chain{full};
                std::function<void()> rec = [&]() {
                    if (static_cast<int>(chain.size()) == len) {
                        std::vector<Mask> ordered(chain.rbegin(), chain.rend());
                        std::vector<int> faces;
                        for (size_t drop = 0; drop < ordered.size(); ++drop) {
                            std::vector<Mask> sub;
                            for (size_t i = 0; i < ordered.size(); ++i)
                                if (i != drop) sub.push_back(ordered[i]);
                            faces.push_back(lookup(s.id, k, sub));
                        }
                        int id = out.add_simplex(len - 1, faces);
                        table[s.id][ordered] = id;
                        return;
                    }
                    Mask top = chain.back();
                    // proper nonempty subsets of top
                    for (Mask sub = (top - 1) & top; sub > 0; sub = (sub - 1) & top) {
                        int need = len - static_cast<int>(chain.size()) - 1;
                        if (std::popcount(sub) <= need) continue;
                        chain.push_back(sub);
                        rec();
                        chain.pop_back();
                    }
                };
                rec();
            }
        }
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// wedge

DeltaComplex wedge(const DeltaComplex& X1, int v1, const DeltaComplex& X2, int v2)
{
    if (!X1.has_simplex(v1) || X1.simplex_dim(v1) != 0)
        throw std::invalid_argument("wedge: invalid vertex id in first complex");
    if (!X2.has_simplex(v2) || X2.simplex_dim(v2) != 0)
        throw std::invalid_argument("wedge: invalid vertex id in second complex");

    int m = std::max(X1.dimension(), X2.dimension());
    DeltaComplex out(m);
    std::map<int, int> map1, map2;
    for (int k = 0; k <= X1.dimension(); ++k) {
        for (const auto& s : X1.simplices(k)) {
            std::vector<int> faces;
            for (int f : s.faces) faces.push_back(map1.at(f));
            map1[s.id] = k == 0 ? out.add_vertex() : out.add_simplex(k, faces);
        }
    }
    map2[v2] = map1.at(v1);
    for (int k = 0; k <= X2.dimension(); ++k) {
        for (const auto& s : X2.simplices(k)) {
            if (k == 0 && s.id == v2) continue;
            std::vector<int> faces;
            for (int f : s.faces) faces.push_back(map2.at(f));
            map2[s.id] = k == 0 ? out.add_vertex() : out.add_simplex(k, faces);
        }
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// stock complexes

DeltaComplex make_circle()
{
    DeltaComplex X(1);
    int v = X.add_vertex();
    X.add_simplex(1, {v, v});
    return X;
}

DeltaComplex make_torus()
{
    DeltaComplex X(2);
    int v = X.add_vertex();
    int a = X.add_simplex(1, {v, v});
    int b = X.add_simplex(1, {v, v});
    int c = X.add_simplex(1, {v, v});
    X.add_simplex(2, {b, c, a}); // lower triangle of the square
    X.add_simplex(2, {a, c, b}); // upper triangle
    X.validate();
    return X;
}

DeltaComplex make_pillow()
{
    DeltaComplex X(2);
    int u0 = X.add_vertex();
    int u1 = X.add_vertex();
    int u2 = X.add_vertex();
    int e0 = X.add_simplex(1, {u2, u1});
    int e1 = X.add_simplex(1, {u2, u0});
    int e2 = X.add_simplex(1, {u1, u0});
    X.add_simplex(2, {e0, e1, e2});
    X.add_simplex(2, {e0, e1, e2});
    X.validate();
    return X;
}

DeltaComplex make_projective_plane()
{
    DeltaComplex X(2);
    int v = X.add_vertex();
    int w = X.add_vertex();
    int a = X.add_simplex(1, {w, v});
    int b = X.add_simplex(1, {w, v});
    int c = X.add_simplex(1, {v, v});
    X.add_simplex(2, {b, a, c});
    X.add_simplex(2, {a, b, c});
    X.validate();
    return X;
}

DeltaComplex make_genus2_surface()
{
    // Octagon a b a^-1 b^-1 c d c^-1 d^-1 with one vertex, fanned from a corner.
    DeltaComplex X(2);
    int v = X.add_vertex();
    auto loop = [&] { return X.add_simplex(1, {v, v}); };
    int a = loop(), b = loop(), c = loop(), d = loop();
    int g2 = loop(), g3 = loop(), g4 = loop(), g5 = loop(), g6 = loop();
    X.add_simplex(2, {b, g2, a});
    X.add_simplex(2, {a, g2, g3});
    X.add_simplex(2, {b, g3, g4});
    X.add_simplex(2, {c, g5, g4});
    X.add_simplex(2, {d, g6, g5});
    X.add_simplex(2, {c, g6, d});
    X.validate();
    return X;
}

DeltaComplex make_single_triangle()
{
    DeltaComplex X(2);
    int u0 = X.add_vertex();
    int u1 = X.add_vertex();
    int u2 = X.add_vertex();
    int e0 = X.add_simplex(1, {u2, u1});
    int e1 = X.add_simplex(1, {u2, u0});
    int e2 = X.add_simplex(1, {u1, u0});
    X.add_simplex(2, {e0, e1, e2});
    X.validate();
    return X;
}

} // namespace entx
