#include "entx/metric_graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace entx {

double MetricGraph::total_length() const
{
    double sum = 0;
    for (const auto& e : edges) sum += e.length;
    return sum;
}

bool MetricGraph::connected() const
{
    if (num_vertices == 0) return false;
    std::vector<bool> seen(num_vertices, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int visited = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& e : edges) {
            for (int w : {e.u == v ? e.v : -1, e.v == v ? e.u : -1}) {
                if (w >= 0 && !seen[w]) {
                    seen[w] = true;
                    ++visited;
                    q.push(w);
                }
            }
        }
    }
    return visited == num_vertices;
}

int MetricGraph::fundamental_rank() const
{
    return static_cast<int>(edges.size()) - num_vertices + 1;
}

void MetricGraph::check() const
{
    if (num_vertices <= 0) throw std::invalid_argument("graph has no vertices");
    if (basepoint < 0 || basepoint >= num_vertices)
        throw std::invalid_argument("basepoint out of range");
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= num_vertices || e.v < 0 || e.v >= num_vertices)
            throw std::invalid_argument("edge endpoint out of range: " + e.name);
        if (!(e.length > 0)) throw std::invalid_argument("edge length must be positive: " + e.name);
    }
    if (!connected()) throw std::invalid_argument("graph is not connected");
}

MetricGraph parse_graph(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    MetricGraph g;
    int lineno = 0;
    bool header = false;
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
        if (kw == "graph") {
            header = true;
        } else if (kw == "vertices") {
            if (!(ls >> g.num_vertices) || g.num_vertices <= 0) fail("bad vertex count");
        } else if (kw == "edge") {
            MetricGraph::Edge e;
            std::string lenfield;
            if (!(ls >> e.name >> e.u >> e.v >> lenfield)) fail("expected `edge <name> <u> <v> length=<x>`");
            if (lenfield.rfind("length=", 0) != 0) fail("missing length= field");
            try {
                e.length = std::stod(lenfield.substr(7));
            } catch (...) {
                fail("bad length value");
            }
            g.edges.push_back(e);
        } else if (kw == "basepoint") {
            if (!(ls >> g.basepoint)) fail("bad basepoint");
        } else {
            fail("unknown keyword: " + kw);
        }
    }
    if (!header) throw std::invalid_argument("missing `graph` header line");
    g.check();
    return g;
}

std::string export_graph(const MetricGraph& g)
{
    std::ostringstream out;
    out << "graph\nvertices " << g.num_vertices << "\n";
    out.precision(17);
    for (const auto& e : g.edges)
        out << "edge " << e.name << " " << e.u << " " << e.v << " length=" << e.length << "\n";
    out << "basepoint " << g.basepoint << "\n";
    return out.str();
}

void CoverSpec::check(const MetricGraph& g) const
{
    if (kind == Kind::FiniteQuotient) {
        if (degree <= 0) throw std::invalid_argument("cover spec: degree must be positive");
        for (const auto& [name, perm] : perms) {
            if (static_cast<int>(perm.size()) != degree)
                throw std::invalid_argument("cover spec: permutation size mismatch for " + name);
            std::vector<bool> hit(degree, false);
            for (int p : perm) {
                if (p < 0 || p >= degree || hit[p])
                    throw std::invalid_argument("cover spec: not a permutation for " + name);
                hit[p] = true;
            }
            bool found = false;
            for (const auto& e : g.edges) found |= e.name == name;
            if (!found) throw std::invalid_argument("cover spec: unknown edge " + name);
        }
    } else if (kind == Kind::FreeQuotient) {
        if (free_rank <= 0) throw std::invalid_argument("cover spec: free rank must be positive");
        for (const auto& [name, word] : words) {
            for (int letter : word) {
                if (letter == 0 || std::abs(letter) > free_rank)
                    throw std::invalid_argument("cover spec: letter out of range for " + name);
            }
            bool found = false;
            for (const auto& e : g.edges) found |= e.name == name;
            if (!found) throw std::invalid_argument("cover spec: unknown edge " + name);
        }
    }
}

CoverSpec parse_cover_spec(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    CoverSpec spec;
    int lineno = 0;
    bool header = false;
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
        if (kw == "trivial") {
            spec.kind = CoverSpec::Kind::Trivial;
            header = true;
        } else if (kw == "quotient") {
            std::string which;
            if (!(ls >> which)) fail("expected `quotient finite|free <n>`");
            if (which == "finite") {
                spec.kind = CoverSpec::Kind::FiniteQuotient;
                if (!(ls >> spec.degree)) fail("bad degree");
            } else if (which == "free") {
                spec.kind = CoverSpec::Kind::FreeQuotient;
                if (!(ls >> spec.free_rank)) fail("bad rank");
            } else {
                fail("unknown quotient kind: " + which);
            }
            header = true;
        } else {
            // `<edge-name> -> ...` assignment line
            std::string arrow;
            if (!(ls >> arrow) || arrow != "->") fail("expected `<edge> -> <assignment>`");
            if (spec.kind == CoverSpec::Kind::FiniteQuotient) {
                // permutation in cycle notation, e.g. (0 1 2)(3)
                std::vector<int> perm(spec.degree);
                for (int i = 0; i < spec.degree; ++i) perm[i] = i;
                std::string rest;
                std::getline(ls, rest);
                std::vector<int> cycle;
                bool in_cycle = false;
                std::string tok;
                for (char ch : rest + " ") {
                    if (ch == '(') {
                        in_cycle = true;
                        cycle.clear();
                    } else if (ch == ')' || (in_cycle && std::isspace(ch)) ||
                               (!in_cycle && std::isspace(ch))) {
                        if (!tok.empty()) {
                            cycle.push_back(std::stoi(tok));
                            tok.clear();
                        }
                        if (ch == ')') {
                            for (size_t i = 0; i < cycle.size(); ++i) {
                                int from = cycle[i], to = cycle[(i + 1) % cycle.size()];
                                if (from < 0 || from >= spec.degree) fail("cycle entry out of range");
                                perm[from] = to;
                            }
                            in_cycle = false;
                        }
                    } else if (std::isdigit(ch) || ch == '-') {
                        tok += ch;
                    } else {
                        fail("bad permutation syntax");
                    }
                }
                spec.perms[kw] = perm;
            } else if (spec.kind == CoverSpec::Kind::FreeQuotient) {
                std::vector<int> word;
                std::string tok;
                while (ls >> tok) {
                    if (tok == "e") continue; // identity
                    word.push_back(std::stoi(tok));
                }
                spec.words[kw] = word;
            } else {
                fail("assignment before quotient header");
            }
        }
    }
    if (!header) throw std::invalid_argument("missing cover spec header");
    return spec;
}

MetricGraph cyclic_cover(const MetricGraph& g, const std::string& edge_name, int sheets)
{
    if (sheets <= 0) throw std::invalid_argument("cyclic_cover: sheets must be positive");
    MetricGraph c;
    c.num_vertices = g.num_vertices * sheets;
    c.basepoint = g.basepoint;
    for (const auto& e : g.edges) {
        int shift = e.name == edge_name ? 1 : 0;
        for (int s = 0; s < sheets; ++s) {
            MetricGraph::Edge le = e;
            le.name = e.name + "#" + std::to_string(s);
            le.u = e.u + s * g.num_vertices;
            le.v = e.v + ((s + shift) % sheets) * g.num_vertices;
            c.edges.push_back(le);
        }
    }
    c.check();
    return c;
}

MetricGraph scaled(const MetricGraph& g, double lambda)
{
    MetricGraph s = g;
    for (auto& e : s.edges) e.length *= lambda;
    return s;
}

MetricGraph make_figure8(double l1, double l2)
{
    MetricGraph g;
    g.num_vertices = 1;
    g.edges = {{"a", 0, 0, l1}, {"b", 0, 0, l2}};
    return g;
}

MetricGraph make_theta()
{
    MetricGraph g;
    g.num_vertices = 2;
    g.edges = {{"a", 0, 1, 1.0}, {"b", 0, 1, 1.0}, {"c", 0, 1, 1.0}};
    return g;
}

MetricGraph make_wedge_of_circles(int n, double len)
{
    MetricGraph g;
    g.num_vertices = 1;
    for (int i = 0; i < n; ++i)
        g.edges.push_back({std::string(1, static_cast<char>('a' + i)), 0, 0, len});
    return g;
}

MetricGraph make_circle_graph(double len)
{
    MetricGraph g;
    g.num_vertices = 1;
    g.edges = {{"a", 0, 0, len}};
    return g;
}

} // namespace entx
