#include "entx/simplex_lp.hpp"

#include <stdexcept>

namespace entx {

namespace {

struct Tableau {
    int m, n;                            // constraint rows, structural columns
    std::vector<std::vector<Rat>> t;     // m rows of n + m + 1 entries (A | I | b)
    std::vector<int> basis;              // basic column per row

    Rat& at(int r, int c) { return t[r][c]; }

    void pivot(int row, int col)
    {
        const int width = n + m + 1;
        Rat p = t[row][col];
        for (int c = 0; c < width; ++c) t[row][c] /= p;
        for (int r = 0; r < m; ++r) {
            if (r == row || t[r][col] == 0) continue;
            Rat f = t[r][col];
            for (int c = 0; c < width; ++c) t[r][c] -= f * t[row][c];
        }
        basis[row] = col;
    }

    // Bland's rule on `cost` (size n + m), entering restricted by `allowed`.
    // Returns false if the program is unbounded for this cost.
    bool optimize(const std::vector<Rat>& cost, int max_col)
    {
        const int bcol = n + m;
        for (;;) {
            int enter = -1;
            for (int j = 0; j < max_col && enter < 0; ++j) {
                bool basic = false;
                for (int r = 0; r < m; ++r) basic |= basis[r] == j;
                if (basic) continue;
                Rat red = cost[j];
                for (int r = 0; r < m; ++r)
                    if (cost[basis[r]] != 0) red -= cost[basis[r]] * t[r][j];
                if (red < 0) enter = j;
            }
            if (enter < 0) return true;
            int leave = -1;
            Rat best = 0;
            for (int r = 0; r < m; ++r) {
                if (t[r][enter] <= 0) continue;
                Rat ratio = t[r][bcol] / t[r][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

} // namespace

LPSolution solve_lp(const LinearProgram& lp)
{
    const int m = lp.A.rows, n = lp.A.cols;
    if (static_cast<int>(lp.b.size()) != m || static_cast<int>(lp.c.size()) != n)
        throw std::invalid_argument("solve_lp: dimension mismatch");

    Tableau tab;
    tab.m = m;
    tab.n = n;
    tab.t.assign(m, std::vector<Rat>(n + m + 1, Rat(0)));
    tab.basis.resize(m);
    std::vector<bool> flipped(m, false);
    for (int r = 0; r < m; ++r) {
        bool flip = lp.b[r] < 0;
        flipped[r] = flip;
        for (int c = 0; c < n; ++c) tab.t[r][c] = flip ? -lp.A.at(r, c) : lp.A.at(r, c);
        tab.t[r][n + r] = 1; // artificial
        tab.t[r][n + m] = flip ? -lp.b[r] : lp.b[r];
        tab.basis[r] = n + r;
    }

    LPSolution sol;

    // Phase 1: minimize the sum of artificials over all columns.
    std::vector<Rat> cost1(n + m, Rat(0));
    for (int r = 0; r < m; ++r) cost1[n + r] = 1;
    tab.optimize(cost1, n + m);
    Rat infeas = 0;
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] >= n) infeas += tab.t[r][n + m];
    if (infeas != 0) {
        sol.status = LPSolution::Status::Infeasible;
        return sol;
    }
    // Drive remaining zero-level artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
        if (tab.basis[r] < n) continue;
        for (int c = 0; c < n; ++c) {
            if (tab.t[r][c] != 0) {
                tab.pivot(r, c);
                break;
            }
        }
    }

    // Phase 2: structural columns only may enter.
    std::vector<Rat> cost2(n + m, Rat(0));
    for (int c = 0; c < n; ++c) cost2[c] = lp.c[c];
    if (!tab.optimize(cost2, n)) {
        sol.status = LPSolution::Status::Unbounded;
        return sol;
    }

    sol.status = LPSolution::Status::Optimal;
    sol.x.assign(n, Rat(0));
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] < n) sol.x[tab.basis[r]] = tab.t[r][n + m];
    for (int c = 0; c < n; ++c) sol.value += lp.c[c] * sol.x[c];
    // Dual from the inverse-basis columns (the artificial block equals B^{-1}).
    sol.dual.assign(m, Rat(0));
    for (int i = 0; i < m; ++i) {
        Rat y = 0;
        for (int r = 0; r < m; ++r)
            if (cost2[tab.basis[r]] != 0) y += cost2[tab.basis[r]] * tab.t[r][n + i];
        sol.dual[i] = flipped[i] ? -y : y;
    }
    return sol;
}

} // namespace entx
