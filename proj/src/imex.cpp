#include "wnv/imex.hpp"

#include <cassert>

namespace wnv {

ImplicitSolver::ImplicitSolver(int n_cells) { resize(n_cells); }

void ImplicitSolver::resize(int n_cells) {
    n_ = n_cells;
    c_prime_.assign(static_cast<std::size_t>(n_cells) + 1, 0.0);
    d_prime_.assign(static_cast<std::size_t>(n_cells) + 1, 0.0);
}

void ImplicitSolver::solve(const ImplicitOperator& op, std::span<const double> rhs, double boundary,
                           std::span<double> out) {
    const int n = n_;
    assert(static_cast<int>(rhs.size()) == n + 1 && static_cast<int>(out.size()) == n + 1);

    const double dd = op.dt * op.diffusion;
    const double diag = 1.0 + op.dt * op.shift + 2.0 * dd;

    // Row 0: diag*w0 - 2 dd w1 = rhs0
    double c = -2.0 * dd / diag;
    double d = rhs[0] / diag;
    c_prime_[0] = c;
    d_prime_[0] = d;
    for (int i = 1; i < n; ++i) {
        const double adv = op.dt * op.advection * 0.5 * i;
        const double lower = -(dd - adv);
        const double upper = -(dd + adv);
        double r = rhs[i];
        if (i == n - 1) r -= upper * boundary;
        const double denom = diag - lower * c_prime_[i - 1];
        c_prime_[i] = i == n - 1 ? 0.0 : upper / denom;
        d_prime_[i] = (r - lower * d_prime_[i - 1]) / denom;
    }

    out[n] = boundary;
    out[n - 1] = d_prime_[n - 1];
    for (int i = n - 2; i >= 0; --i) out[i] = d_prime_[i] - c_prime_[i] * out[i + 1];
}

bool is_monotone(const ImplicitOperator& op, int n_cells) noexcept {
    return op.diffusion >= op.advection * 0.5 * n_cells;
}

} // namespace wnv
