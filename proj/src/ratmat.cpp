#include "entx/ratmat.hpp"

namespace entx {

static int eliminate(RatMatrix& m, std::vector<int>& pivots)
{
    int rank = 0;
    for (int c = 0; c < m.cols && rank < m.rows; ++c) {
        int piv = -1;
        for (int r = rank; r < m.rows; ++r) {
            if (m.a[r][c] != 0) { piv = r; break; }
        }
        if (piv < 0) continue;
        std::swap(m.a[rank], m.a[piv]);
        Rat inv = Rat(1) / m.a[rank][c];
        for (int j = c; j < m.cols; ++j) m.a[rank][j] *= inv;
        for (int r = 0; r < m.rows; ++r) {
            if (r == rank || m.a[r][c] == 0) continue;
            Rat f = m.a[r][c];
            for (int j = c; j < m.cols; ++j) m.a[r][j] -= f * m.a[rank][j];
        }
        pivots.push_back(c);
        ++rank;
    }
    return rank;
}

int rat_rank(RatMatrix m, std::vector<int>* pivot_cols)
{
    std::vector<int> pivots;
    int rank = eliminate(m, pivots);
    if (pivot_cols) *pivot_cols = pivots;
    return rank;
}

std::vector<std::vector<Rat>> rat_kernel(const RatMatrix& m)
{
    RatMatrix red = m;
    std::vector<int> pivots;
    eliminate(red, pivots);

    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivots) is_pivot[c] = true;

    std::vector<std::vector<Rat>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(m.cols, Rat(0));
        v[free] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -red.a[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace entx
