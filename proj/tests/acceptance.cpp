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

// End-to-end acceptance suite. Runs every shipping criterion at its stated
// tolerance and prints one pass/fail line per criterion. The density
// criteria integrate the full master equation over 6T, so the whole suite
// takes roughly an hour on two cores.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <numbers>
#include <sstream>
#include <vector>

#include "bsa/config.hpp"
#include "bsa/subspace.hpp"
#include "bsa/sweep.hpp"

using namespace bsa;

namespace {

constexpr double kOmegaMax = std::numbers::pi * std::numbers::pi / 2.0;

struct Criterion {
    std::string name;
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void log_progress(const std::string& msg) {
    std::fprintf(stderr, "[acceptance] %s\n", msg.c_str());
    std::fflush(stderr);
}

/// Runs the tasks two at a time (the box has two cores).
void run_parallel(std::vector<std::function<void()>>& tasks) {
    for (size_t k = 0; k < tasks.size(); k += 2) {
        if (k + 1 < tasks.size()) {
            auto other = std::async(std::launch::async, tasks[k + 1]);
            tasks[k]();
            other.get();
        } else {
            tasks[k]();
        }
    }
}

ProtocolResult converged_density_run(const DecoherenceSpec& rates, BellState input,
                                     const DeviceParams& params) {
    IntegratorConfig cfg;
    cfg.dt = 2e-3;                   // certified against dt/2 by the halving loop
    cfg.convergence_target = 1e-6;   // far below every density tolerance here
    cfg.max_halvings = 4;
    cfg.kernel_threads = 1;          // runs are paired on the two cores instead
    return run_protocol(InitialCondition::from_bell(input), params, rates, cfg);
}

// ---------------------------------------------------------------- criterion 1
Criterion ideal_operating_point(std::vector<ProtocolResult>& ideal_out) {
    Criterion c{"ideal operating point"};
    const DeviceParams params = uniform_device(66.0);
    double worst_p = 1.0, worst_wall = 0.0;
    for (int s = 0; s < 4; ++s) {
        IntegratorConfig cfg;  // dt = 1e-3 T, convergence target 1e-8
        const ProtocolResult r =
            run_protocol(InitialCondition::from_bell(BellState(s)), params, DecoherenceSpec{}, cfg);
        ideal_out.push_back(r);
        const double p = r.probabilities[static_cast<size_t>(s)];
        worst_p = std::min(worst_p, p);
        worst_wall = std::max(worst_wall, r.wall_seconds);
        c.require(r.pure_path, bell_label(BellState(s)) + " did not use the pure fast path");
        c.require(p >= 1.0 - 5e-5,
                  "P(" + bell_label(BellState(s)) + ") = " + fmt(p) + " < 1 - 5e-5");
        c.require(r.wall_seconds <= 60.0,
                  bell_label(BellState(s)) + " took " + fmt(r.wall_seconds) + " s > 60 s");
    }
    c.note("min matching P = " + fmt(worst_p) + ", max wall = " + fmt(worst_wall) + " s");
    return c;
}

// ---------------------------------------------------------------- criterion 2
Criterion experimental_point(std::vector<ProtocolResult>& runs_out) {
    Criterion c{"experimental-parameter point"};
    const SimConfig scenario = experimental_config();
    runs_out.resize(4);
    std::vector<std::function<void()>> tasks;
    for (int s = 0; s < 4; ++s) {
        tasks.push_back([&, s] {
            runs_out[static_cast<size_t>(s)] =
                converged_density_run(scenario.rates, BellState(s), scenario.params);
            log_progress("experimental input " + bell_label(BellState(s)) + " done (" +
                         fmt(runs_out[static_cast<size_t>(s)].wall_seconds) + " s)");
        });
    }
    run_parallel(tasks);
    for (int s = 0; s < 4; ++s) {
        const ProtocolResult& r = runs_out[static_cast<size_t>(s)];
        const double p = r.probabilities[static_cast<size_t>(s)];
        c.require(p >= 0.9554 - 0.005 && p <= 0.9555 + 0.005,
                  "P(" + bell_label(BellState(s)) + ") = " + fmt(p) +
                      " outside 0.9554..0.9555 +- 0.005");
        c.require(r.wall_seconds <= 900.0,
                  bell_label(BellState(s)) + " run took " + fmt(r.wall_seconds) + " s > 15 min");
        c.note("P(" + bell_label(BellState(s)) + ") = " + fmt(p));
    }
    return c;
}

// ---------------------------------------------------------------- criterion 3
Criterion fig5_checkpoints() {
    Criterion c{"single-rate sweep checkpoints"};
    const DeviceParams params = uniform_device(66.0);
    struct Point {
        const char* tag;
        DecoherenceSpec rates;
        double lo, hi;
    };
    std::vector<Point> points(3);
    points[0].tag = "kappa/Omega=0.01";
    points[0].rates.kappa = 0.01 * kOmegaMax;
    points[0].lo = 0.9996 - 0.001;
    points[0].hi = 1.0;
    points[1].tag = "gamma/Omega=0.01";
    points[1].rates.gamma = 0.01 * kOmegaMax;
    points[1].lo = 0.955;
    points[1].hi = 0.975;
    points[2].tag = "gammaphi/Omega=0.001";
    points[2].rates.gamma_phi = 0.001 * kOmegaMax;
    points[2].lo = 0.96 - 0.005;
    points[2].hi = 1.0;

    std::array<std::array<double, 4>, 3> matched{};
    std::vector<std::function<void()>> tasks;
    for (size_t k = 0; k < points.size(); ++k) {
        for (int s = 0; s < 4; ++s) {
            tasks.push_back([&, k, s] {
                const ProtocolResult r =
                    converged_density_run(points[k].rates, BellState(s), params);
                matched[k][static_cast<size_t>(s)] = r.probabilities[static_cast<size_t>(s)];
                log_progress(std::string(points[k].tag) + " input " +
                             bell_label(BellState(s)) + " -> " +
                             fmt(matched[k][static_cast<size_t>(s)]));
            });
        }
    }
    run_parallel(tasks);
    for (size_t k = 0; k < points.size(); ++k) {
        double lowest = 1.0, highest = 0.0;
        for (int s = 0; s < 4; ++s) {
            lowest = std::min(lowest, matched[k][static_cast<size_t>(s)]);
            highest = std::max(highest, matched[k][static_cast<size_t>(s)]);
        }
        c.require(lowest >= points[k].lo, std::string(points[k].tag) + ": min P = " +
                                              fmt(lowest) + " < " + fmt(points[k].lo));
        c.require(highest <= points[k].hi, std::string(points[k].tag) + ": max P = " +
                                               fmt(highest) + " > " + fmt(points[k].hi));
        c.note(std::string(points[k].tag) + " -> [" + fmt(lowest) + ", " + fmt(highest) + "]");
    }
    return c;
}

// ---------------------------------------------------------------- criterion 4
Criterion fig4_shape() {
    Criterion c{"coupling-sweep shape"};
    SweepSpec spec;
    spec.axis = SweepAxis::G;
    spec.lo = 5.0;
    spec.hi = 100.0;
    spec.points = 40;
    spec.base_params = uniform_device(66.0);
    spec.integrator.dt = 1e-3;
    const SweepResult result = sweep(spec, 2);
    double max_pair_gap = 0.0;
    for (const auto& row : result.rows) {
        c.require(row.error.empty(), "row g=" + fmt(row.axis_value) + " failed: " + row.error);
        if (!row.error.empty()) continue;
        const double pmax = *std::max_element(row.probabilities.begin(), row.probabilities.end());
        const double pmin = *std::min_element(row.probabilities.begin(), row.probabilities.end());
        if (row.axis_value <= 10.0) {
            c.require(pmax < 0.9, "g=" + fmt(row.axis_value) + ": max P = " + fmt(pmax) +
                                      " not < 0.9");
        }
        if (row.axis_value >= 30.0) {
            c.require(pmin >= 0.999, "g=" + fmt(row.axis_value) + ": min P = " + fmt(pmin) +
                                         " < 0.999");
        }
        max_pair_gap = std::max(max_pair_gap,
                                std::abs(row.probabilities[1] - row.probabilities[2]));
    }
    c.require(max_pair_gap <= 1e-6,
              "P(psi-) and P(phi+) split by " + fmt(max_pair_gap) + " > 1e-6");
    c.note("40 points over g in [5,100]/T, max psi-/phi+ gap = " + fmt(max_pair_gap));
    return c;
}

// ---------------------------------------------------------------- criterion 5
Criterion sta_oracle() {
    Criterion c{"frame-tracking propagator equivalence"};
    const PathParams path = cosine_path();
    auto h = [&](double t) { return Eigen::MatrixXcd(chain_hamiltonian(path, t)); };
    Eigen::Matrix3cd u_num = Eigen::Matrix3cd::Identity();
    double worst = 0.0;
    const int grid = 100;
    for (int k = 1; k <= grid; ++k) {
        const double t0 = (k - 1) / double(grid);
        const double t1 = k / double(grid);
        for (int col = 0; col < 3; ++col) {
            u_num.col(col) = dense_rk4(h, u_num.col(col), t0, t1, 200);
        }
        worst = std::max(worst, (u_num - analytic_propagator(path, t1)).norm());
    }
    c.require(worst <= 1e-6, "max |U_num - U'| = " + fmt(worst) + " > 1e-6");

    const Eigen::Matrix3cd uT = analytic_propagator(path, 1.0);
    const double swap_err =
        std::max({std::abs(uT(0, 2) - cplx(1, 0)), std::abs(uT(2, 0) - cplx(1, 0)),
                  std::abs(uT(0, 0)), std::abs(uT(2, 2)), std::abs(uT(0, 1)),
                  std::abs(uT(1, 0)), std::abs(uT(1, 2)), std::abs(uT(2, 1))});
    c.require(swap_err <= 1e-14, "end-of-step swap block off by " + fmt(swap_err));
    c.require(std::abs(std::abs(uT(1, 1)) - 1.0) <= 1e-14, "middle element not unimodular");
    c.note("max |U_num - U'| = " + fmt(worst) + " on a 100-point grid");
    return c;
}

// ---------------------------------------------------------------- criterion 6
Criterion effective_model_agreement() {
    Criterion c{"nine-state vs chain-reduction populations"};
    const EffectiveComparison at66 = compare_effective(uniform_device(66.0));
    c.require(at66.max_deviation <= 2e-5,
              "deviation at g=66/T is " + fmt(at66.max_deviation) + " > 2e-5");
    c.note("deviation at g=66/T = " + fmt(at66.max_deviation));

    double last = at66.max_deviation;
    std::string trail = fmt(last);
    for (double g : {20.0, 15.0, 10.0, 7.0, 5.0}) {
        const EffectiveComparison cmp = compare_effective(uniform_device(g));
        c.require(cmp.max_deviation > last,
                  "deviation at g=" + fmt(g) + " (" + fmt(cmp.max_deviation) +
                      ") did not grow past " + fmt(last));
        last = cmp.max_deviation;
        trail += " -> " + fmt(last);
    }
    c.note("deviation trail " + trail);
    return c;
}

// ---------------------------------------------------------------- criterion 7
Criterion truth_tables(const std::vector<ProtocolResult>& ideal_runs) {
    Criterion c{"truth tables and readout map"};
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const CheckReport report = verify_truth_tables(uniform_device(66.0), cfg);
    for (const auto& row : report.rows) {
        c.require(row.pass, row.name + " = " + fmt(row.value));
    }
    const CheckReport rotations = single_qubit_check();
    for (const auto& row : rotations.rows) {
        c.require(row.pass, row.name + " = " + fmt(row.value));
    }
    // end-to-end readout: each ideal run flags its own pattern and no other
    for (int s = 0; s < 4 && s < static_cast<int>(ideal_runs.size()); ++s) {
        const auto& p = ideal_runs[static_cast<size_t>(s)].probabilities;
        const int best = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
        c.require(best == s, "input " + bell_label(BellState(s)) + " read out as " +
                                 bell_label(BellState(best)));
        c.require(p[static_cast<size_t>(s)] >= 0.999,
                  "end-to-end P(" + bell_label(BellState(s)) + ") = " +
                      fmt(p[static_cast<size_t>(s)]) + " < 0.999");
    }
    c.note(std::to_string(report.rows.size() + rotations.rows.size()) +
           " table rows checked");
    return c;
}

// ---------------------------------------------------------------- criterion 8
Criterion numerical_hygiene(const std::vector<ProtocolResult>& density_runs) {
    Criterion c{"numerical hygiene"};
    for (size_t k = 0; k < density_runs.size(); ++k) {
        const ProtocolResult& r = density_runs[k];
        c.require(r.trace_drift <= 1e-8, "trace drift " + fmt(r.trace_drift));
        c.require(r.hermiticity_residual <= 1e-10,
                  "hermiticity residual " + fmt(r.hermiticity_residual));
        c.require(r.min_eigenvalue >= -1e-8, "min eigenvalue " + fmt(r.min_eigenvalue));
    }

    // zero-rate master equation against the pure path, all four probabilities
    auto space = build_space(protocol_layout());
    const DeviceParams params = uniform_device(66.0);
    const TimeDependentHamiltonian h = protocol_hamiltonian(space, params);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.kernel_threads = 2;
    cfg.check_positivity = false;
    const PureState psi0 =
        protocol_initial_state(space, InitialCondition::from_bell(BellState::PsiPlus));
    const DensityState rho_final =
        evolve_lindblad(h, lindblad_operators(DecoherenceSpec{}, space), pure_density(psi0),
                        0.0, 6.0, cfg);
    const PureState psi_final = evolve_schrodinger(h, psi0, 0.0, 6.0, cfg);
    const auto p_rho = success_probabilities(rho_final).identity_on_cavities;
    const auto p_psi = success_probabilities(psi_final).identity_on_cavities;
    double gap = 0.0;
    for (int x = 0; x < 4; ++x) {
        gap = std::max(gap, std::abs(p_rho[static_cast<size_t>(x)] - p_psi[static_cast<size_t>(x)]));
    }
    c.require(gap <= 1e-7, "zero-rate master equation off the pure path by " + fmt(gap));
    c.note("zero-rate vs pure gap = " + fmt(gap));

    // fourth-order check against the Rabi closed form
    auto q_space = build_space(single_subsystem("q", 2));
    SparseOperator drive = transition_op(q_space, "q", 0, 1) * cplx(1.0, 0.0);
    drive = drive + drive.dagger();
    TimeDependentHamiltonian rabi;
    rabi.space = q_space;
    rabi.constant = drive;
    Vec up = Vec::Zero(2);
    up[0] = 1.0;
    auto rabi_error = [&](double dt) {
        IntegratorConfig rc;
        rc.dt = dt;
        rc.norm_abort = 1.0;
        const PureState out =
            evolve_schrodinger(rabi, PureState(q_space, up), 0.0, 3.0, rc);
        return std::abs(std::norm(out.amplitudes()[1]) - std::pow(std::sin(3.0), 2));
    };
    const double ratio = rabi_error(0.05) / rabi_error(0.025);
    c.require(ratio >= 8.0 && ratio <= 32.0,
              "dt-halving error ratio " + fmt(ratio) + " not ~16");
    c.note("Rabi error ratio at half step = " + fmt(ratio));
    return c;
}

// ---------------------------------------------------------------- criterion 9
Criterion determinism() {
    Criterion c{"determinism and parallel equivalence"};
    SweepSpec spec;
    spec.axis = SweepAxis::G;
    spec.lo = 30.0;
    spec.hi = 66.0;
    spec.points = 3;
    spec.base_params = uniform_device(66.0);
    spec.integrator.dt = 1e-3;
    spec.inputs = {BellState::PsiPlus, BellState::PhiMinus};
    const std::string serial_a = to_csv(sweep(spec, 1));
    const std::string serial_b = to_csv(sweep(spec, 1));
    const std::string parallel = to_csv(sweep(spec, 3));
    c.require(serial_a == serial_b, "two serial sweeps differ");
    c.require(serial_a == parallel, "parallel sweep differs from serial");
    c.note("3-point sweep repeated serially and with 3 workers, byte-identical");
    return c;
}

}  // namespace

int main() {
    const auto t_start = std::chrono::steady_clock::now();
    std::vector<Criterion> results(9);

    log_progress("criterion 5/6/9: oracles and determinism");
    results[4] = sta_oracle();
    results[5] = effective_model_agreement();
    results[8] = determinism();

    log_progress("criterion 1: ideal operating point");
    std::vector<ProtocolResult> ideal_runs;
    results[0] = ideal_operating_point(ideal_runs);

    log_progress("criterion 7: truth tables");
    results[6] = truth_tables(ideal_runs);

    log_progress("criterion 4: coupling sweep (40 points)");
    results[3] = fig4_shape();

    log_progress("criterion 2: experimental point (4 density runs)");
    std::vector<ProtocolResult> density_runs;
    results[1] = experimental_point(density_runs);

    log_progress("criterion 8: hygiene");
    results[7] = numerical_hygiene(density_runs);

    log_progress("criterion 3: single-rate checkpoints (12 density runs)");
    results[2] = fig5_checkpoints();

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    bool all_pass = true;
    for (size_t k = 0; k < results.size(); ++k) {
        std::printf("criterion-%zu %-42s %s  %s\n", k + 1, results[k].name.c_str(),
                    results[k].pass ? "PASS" : "FAIL", results[k].detail.c_str());
        all_pass = all_pass && results[k].pass;
    }
    std::printf("acceptance suite %s in %.0f s\n", all_pass ? "PASSED" : "FAILED", wall);
    return all_pass ? 0 : 1;
}
