#ifndef ENTX_SIMPLEX_LP_HPP
#define ENTX_SIMPLEX_LP_HPP

#include <vector>

#include "entx/ratmat.hpp"

namespace entx {

/// Exact-rational linear program in standard form:
/// minimize c^T x subject to A x = b, x >= 0.
struct LinearProgram {
    RatMatrix A;
    std::vector<Rat> b;
    std::vector<Rat> c;

    LinearProgram(int rows, int cols) : A(rows, cols), b(rows, Rat(0)), c(cols, Rat(0)) {}
};

struct LPSolution {
    enum class Status { Optimal, Infeasible, Unbounded } status = Status::Optimal;
    Rat value = 0;
    std::vector<Rat> x;
    std::vector<Rat> dual; // y with A^T y <= c at optimality, b^T y = value
};

// Two-phase primal simplex with Bland's rule; deterministic and cycling-free.
LPSolution solve_lp(const LinearProgram& lp);

} // namespace entx

#endif
