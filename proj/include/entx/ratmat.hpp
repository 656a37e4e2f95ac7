#ifndef ENTX_RATMAT_HPP
#define ENTX_RATMAT_HPP

#include <vector>

#include "entx/rational.hpp"

namespace entx {

/// Dense exact-rational matrix, just enough for boundary ranks and kernels.
struct RatMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<Rat>> a;

    RatMatrix(int r, int c) : rows(r), cols(c), a(r, std::vector<Rat>(c, Rat(0))) {}

    Rat& at(int r, int c) { return a[r][c]; }
    const Rat& at(int r, int c) const { return a[r][c]; }
};

// Gaussian elimination; returns rank. If pivot_cols is non-null it receives
// the pivot column indices of the reduced form.
int rat_rank(RatMatrix m, std::vector<int>* pivot_cols = nullptr);

// Basis of the right kernel, one vector per free column.
std::vector<std::vector<Rat>> rat_kernel(const RatMatrix& m);

} // namespace entx

#endif
