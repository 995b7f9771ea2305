#pragma once

#include "wnv/imex.hpp"
#include "wnv/model.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace wnv {

/// State of the free-boundary problem in front-fixed coordinates:
/// u(y,t) = I_b(y h(t), t), v(y,t) = I_m(y h(t), t) on y_i = i/N.
struct SimState {
    double t = 0.0;
    double h = 0.0;
    std::vector<double> u;
    std::vector<double> v;

    [[nodiscard]] int n_cells() const noexcept { return static_cast<int>(u.size()) - 1; }
};

struct SolverConfig {
    int n_cells = 256;
    double dt = 1.0 / 512.0;
    double t_max = 10.0;
    int snapshot_stride = 64; // steps between stored snapshots
    double H_max = 1e300;     // early spreading stop
    double eps_ext = 1e-6;    // early vanishing stop: max u + max v below this...
    double eps_front = 0.0;   // ...while h' < eps_front for a full period
    bool fixed_front = false; // freeze h (fixed-domain problem with Dirichlet 0 at h0)
};

struct FrontSample {
    double t = 0.0;
    double h = 0.0;
    double hprime = 0.0;
    double max_Ib = 0.0;
    double max_Im = 0.0;
    double int_Ib = 0.0; // trapezoid integral over [0, h]
    double int_Im = 0.0;
};

enum class StopReason { Horizon, FrontReachedHmax, Extinct };

std::string_view to_string(StopReason reason) noexcept;

struct Trajectory {
    std::vector<SimState> snapshots;
    std::vector<FrontSample> history; // one entry per step, plus the initial state
    StopReason stop = StopReason::Horizon;
    double max_hprime = 0.0; // empirical sup of h'; no bound is certified
};

/// Largest dt keeping the explicit reaction update monotone and inside
/// [0,N_b] x [0,A_m] (diffusion and advection are implicit).
double stable_dt(const ModelParams& params);

/// Value of dI_b/dx at x = h from the one-sided second-order stencil
/// (3u_N - 4u_{N-1} + u_{N-2}) / (2 dy h).
double front_gradient(const SimState& state);

/// Front speed mu * (-front_gradient), floored at zero.
double front_speed(const SimState& state, double mu);

/// Resamples initial data onto the transformed grid with monotone cubic
/// (PCHIP) interpolation.
SimState initial_state(const ModelParams& params, const InitialData& init, int n_cells);

/// Reusable stepper; holds scratch buffers only.
class FrontStepper {
public:
    explicit FrontStepper(int n_cells);

    /// Advances one IMEX step. With `fixed_front` the front does not move.
    SimState step(const SimState& state, const ModelParams& params, double dt, bool fixed_front = false);

private:
    ImplicitSolver solver_;
    std::vector<double> rhs_u_;
    std::vector<double> rhs_v_;
};

SimState step(const SimState& state, const ModelParams& params, double dt);

using StateObserver = std::function<void(const SimState&)>;

/// Runs the stepper until t_max or an early stop. The observer, if given,
/// sees every state including the initial one.
Trajectory simulate(const ModelParams& params, const InitialData& init, const SolverConfig& config,
                    const StateObserver& observer = {});

/// Same, starting from an explicit state.
Trajectory simulate_from(const ModelParams& params, SimState state, const SolverConfig& config,
                         const StateObserver& observer = {});

/// CSV `t,h,hprime,max_Ib,max_Im`.
void write_front_csv(std::ostream& out, const Trajectory& trajectory);
/// CSV `t,y,x,Ib,Im`.
void write_snapshot_csv(std::ostream& out, const Trajectory& trajectory);

} // namespace wnv
