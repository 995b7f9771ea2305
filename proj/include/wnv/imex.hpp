#pragma once

#include <span>
#include <vector>

namespace wnv {

/// Implicit part of one IMEX step on the uniform grid y_i = i/N of [0,1]
/// (or x_i = i*dx on a fixed interval):
///
///   (1 + dt*shift) w_i - dt*diffusion*(w_{i+1} - 2 w_i + w_{i-1})
///                      - dt*advection*(i/2)*(w_{i+1} - w_{i-1}) = rhs_i
///
/// for 0 <= i < N, with a mirror ghost w_{-1} = w_1 at i = 0 (zero flux) and
/// w_N = boundary. `diffusion` is D/(h^2 dy^2) and `advection` is h'/h, so
/// the advective velocity y h'/h becomes advection*i*dy and the central
/// difference contributes advection*i/2.
struct ImplicitOperator {
    double dt = 0.0;
    double diffusion = 0.0;
    double advection = 0.0;
    double shift = 0.0;
};

/// Thomas-algorithm solver with reusable scratch storage.
class ImplicitSolver {
public:
    explicit ImplicitSolver(int n_cells = 0);

    void resize(int n_cells);
    [[nodiscard]] int n_cells() const noexcept { return n_; }

    /// Writes the N+1 node values into `out` (out may alias rhs).
    void solve(const ImplicitOperator& op, std::span<const double> rhs, double boundary, std::span<double> out);

private:
    int n_ = 0;
    std::vector<double> c_prime_;
    std::vector<double> d_prime_;
};

/// True when the implicit matrix is an M-matrix (off-diagonals <= 0), which
/// makes its inverse nonnegative: diffusion >= advection * N / 2.
[[nodiscard]] bool is_monotone(const ImplicitOperator& op, int n_cells) noexcept;

} // namespace wnv
