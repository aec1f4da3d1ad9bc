// Copyright 2026 The bsa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BSA_INTEGRATOR_HPP
#define BSA_INTEGRATOR_HPP

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsa/hamiltonian.hpp"
#include "bsa/lindblad.hpp"
#include "bsa/states.hpp"

namespace bsa {

/// Fixed-step integration settings. Fixed-step classical RK4 keeps sweep
/// tables reproducible; accuracy is certified by re-running with dt halved
/// until the observables stop moving (see converge()).
struct IntegratorConfig {
    double dt = 1e-3;                 // base time step
    double convergence_target = 1e-8; // tolerance on the four probabilities
    int max_halvings = 12;
    double norm_abort = 1e-6;         // pure-state norm drift limit
    double trace_abort = 1e-6;        // density trace drift limit
    double min_eig_abort = -1e-6;     // density positivity limit
    bool check_positivity = true;     // eigensolve at sample checkpoints
    // Density-path workers. Work is split into fixed chunks with disjoint
    // writes, so any value produces bit-identical results.
    int kernel_threads = 1;
    std::string trajectory_dump;      // optional CSV path (density path)
    std::vector<int> dump_populations;  // diagonal indices added to the dump
};

/// Raised when the integrator detects a broken invariant mid-run.
class IntegrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct EvolutionStats {
    double norm_drift = 0.0;            // pure path: max | ||psi|| - 1 |
    double trace_drift = 0.0;           // density path: max |tr rho - tr rho(0)|
    double hermiticity_residual = 0.0;  // max pre-symmetrization residual
    double min_eigenvalue = 1.0;        // smallest eigenvalue seen at checkpoints
    long steps = 0;
    double dt_used = 0.0;
};

/// Propagates i psi' = H(t) psi with classical RK4. The step count is
/// round((t1-t0)/dt), so the actual step divides the span exactly.
/// `on_sample` fires at t0 and whenever a step lands on one of the
/// requested times (which therefore should be multiples of the step).
PureState evolve_schrodinger(const TimeDependentHamiltonian& h, const PureState& psi0,
                             double t0, double t1, const IntegratorConfig& cfg,
                             EvolutionStats* stats = nullptr,
                             std::span<const double> sample_times = {},
                             const std::function<void(double, const PureState&)>& on_sample = {});

/// Propagates rho' = i[rho, H(t)] + sum_p (L_p rho L_p^+ - {L_p^+ L_p, rho}/2)
/// with classical RK4 and per-step symmetrization of rho.
DensityState evolve_lindblad(const TimeDependentHamiltonian& h,
                             const std::vector<SparseOperator>& lindblad_ops,
                             const DensityState& rho0, double t0, double t1,
                             const IntegratorConfig& cfg, EvolutionStats* stats = nullptr,
                             std::span<const double> sample_times = {},
                             const std::function<void(double, const DensityState&)>& on_sample = {});

template <class Result>
struct Converged {
    Result result;
    int halvings = 0;
    double final_dt = 0.0;
    double last_delta = 0.0;
};

/// Runs `run(dt)` with dt halved until the four probabilities reported by
/// `probes(result)` change by less than cfg.convergence_target, then
/// returns the finest run. At least one halving is always performed (two
/// runs are needed for a comparison). Throws after cfg.max_halvings.
template <class RunFn, class ProbeFn>
auto converge(RunFn&& run, ProbeFn&& probes, const IntegratorConfig& cfg)
    -> Converged<std::decay_t<decltype(run(0.0))>> {
    using Result = std::decay_t<decltype(run(0.0))>;
    double dt = cfg.dt;
    Result prev = run(dt);
    std::array<double, 4> prev_p = probes(prev);
    for (int h = 1; h <= cfg.max_halvings; ++h) {
        dt /= 2;
        Result next = run(dt);
        const std::array<double, 4> next_p = probes(next);
        double delta = 0.0;
        for (size_t i = 0; i < 4; ++i) delta = std::max(delta, std::abs(next_p[i] - prev_p[i]));
        if (delta < cfg.convergence_target) {
            return {std::move(next), h, dt, delta};
        }
        prev = std::move(next);
        prev_p = next_p;
    }
    throw IntegrationError("probabilities did not settle to " +
                           std::to_string(cfg.convergence_target) + " within " +
                           std::to_string(cfg.max_halvings) + " dt-halvings");
}

}  // namespace bsa

#endif  // BSA_INTEGRATOR_HPP
