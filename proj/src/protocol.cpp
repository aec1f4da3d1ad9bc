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

#include "bsa/protocol.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bsa {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;

/// Ancilla readout pattern (A1, A2) flagging each Bell state.
constexpr int kAncillaPattern[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
}  // namespace

std::string bell_label(BellState s) {
    switch (s) {
        case BellState::PsiPlus: return "psi+";
        case BellState::PsiMinus: return "psi-";
        case BellState::PhiPlus: return "phi+";
        case BellState::PhiMinus: return "phi-";
    }
    throw std::invalid_argument("unknown Bell state");
}

BellState parse_bell(const std::string& name) {
    if (name == "psi+") return BellState::PsiPlus;
    if (name == "psi-") return BellState::PsiMinus;
    if (name == "phi+") return BellState::PhiPlus;
    if (name == "phi-") return BellState::PhiMinus;
    throw std::invalid_argument("unknown Bell state '" + name +
                                "' (expected psi+, psi-, phi+ or phi-)");
}

std::array<cplx, 4> bell_amplitudes(BellState s) {
    // amplitudes over |00>, |01>, |10>, |11> of B1 B2
    switch (s) {
        case BellState::PsiPlus: return {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
        case BellState::PsiMinus: return {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
        case BellState::PhiPlus: return {0.0, kInvSqrt2, kInvSqrt2, 0.0};
        case BellState::PhiMinus: return {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
    }
    throw std::invalid_argument("unknown Bell state");
}

InitialCondition InitialCondition::from_bell(BellState s) {
    InitialCondition init;
    init.bell = s;
    init.amplitudes = bell_amplitudes(s);
    return init;
}

InitialCondition InitialCondition::from_amplitudes(const std::array<cplx, 4>& amps) {
    double norm2 = 0.0;
    for (const auto& a : amps) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-10) {
        throw std::invalid_argument("carrier amplitudes are not normalized");
    }
    InitialCondition init;
    init.amplitudes = amps;
    return init;
}

std::array<cplx, 4> InitialCondition::carrier_amplitudes() const {
    return bell ? bell_amplitudes(*bell) : amplitudes;
}

std::string InitialCondition::describe() const {
    if (bell) return bell_label(*bell);
    std::ostringstream out;
    out << "custom(";
    for (int k = 0; k < 4; ++k) {
        if (k) out << ", ";
        out << amplitudes[static_cast<size_t>(k)].real();
        if (amplitudes[static_cast<size_t>(k)].imag() != 0.0) {
            out << (amplitudes[static_cast<size_t>(k)].imag() >= 0 ? "+" : "") << amplitudes[static_cast<size_t>(k)].imag() << "i";
        }
    }
    out << ")";
    return out.str();
}

PureState protocol_initial_state(const SpacePtr& space, const InitialCondition& init) {
    const auto amps = init.carrier_amplitudes();
    Vec v = Vec::Zero(space->dim());
    const int ns = space->subsystem_count();
    std::vector<int> levels(static_cast<size_t>(ns), 0);
    const int kB1 = space->subsystem_index("B1");
    const int kB2 = space->subsystem_index("B2");
    for (int b1 = 0; b1 < 2; ++b1) {
        for (int b2 = 0; b2 < 2; ++b2) {
            const cplx a = amps[static_cast<size_t>(2 * b1 + b2)];
            if (a == cplx(0.0, 0.0)) continue;
            levels[static_cast<size_t>(kB1)] = b1;
            levels[static_cast<size_t>(kB2)] = b2;
            v[space->flat_index(levels)] = a;
        }
    }
    PureState psi(space, std::move(v));
    psi.normalize();
    return psi;
}

SparseOperator readout_projector(const SpacePtr& space, BellState s, bool vacuum_conditioned) {
    const auto bell = bell_amplitudes(s);
    const int a1 = kAncillaPattern[static_cast<int>(s)][0];
    const int a2 = kAncillaPattern[static_cast<int>(s)][1];
    const int kA1 = space->subsystem_index("A1");
    const int kA2 = space->subsystem_index("A2");
    const int kB1 = space->subsystem_index("B1");
    const int kB2 = space->subsystem_index("B2");
    const int kM1 = space->subsystem_index("a1");
    const int kM2 = space->subsystem_index("a2");
    const int n1 = space->subsystem_dim(kM1);
    const int n2 = space->subsystem_dim(kM2);

    // flat indices and amplitudes of the readout ket for fixed photons (p, q)
    std::vector<int> levels(static_cast<size_t>(space->subsystem_count()), 0);
    levels[static_cast<size_t>(kA1)] = a1;
    levels[static_cast<size_t>(kA2)] = a2;
    std::vector<SparseOperator::Entry> entries;
    const int p_max = vacuum_conditioned ? 1 : n1;
    const int q_max = vacuum_conditioned ? 1 : n2;
    for (int p = 0; p < p_max; ++p) {
        for (int q = 0; q < q_max; ++q) {
            levels[static_cast<size_t>(kM1)] = p;
            levels[static_cast<size_t>(kM2)] = q;
            std::array<int, 4> idx{};
            std::array<cplx, 4> amp{};
            int count = 0;
            for (int b1 = 0; b1 < 2; ++b1) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    const cplx a = bell[static_cast<size_t>(2 * b1 + b2)];
                    if (a == cplx(0.0, 0.0)) continue;
                    levels[static_cast<size_t>(kB1)] = b1;
                    levels[static_cast<size_t>(kB2)] = b2;
                    idx[static_cast<size_t>(count)] = space->flat_index(levels);
                    amp[static_cast<size_t>(count)] = a;
                    ++count;
                }
            }
            for (int i = 0; i < count; ++i) {
                for (int j = 0; j < count; ++j) {
                    entries.push_back({idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)],
                                       amp[static_cast<size_t>(i)] * std::conj(amp[static_cast<size_t>(j)])});
                }
            }
        }
    }
    return SparseOperator(space, std::move(entries));
}

namespace {

template <class State>
SuccessProbabilities probabilities_of(const State& state) {
    SuccessProbabilities out;
    const auto& space = state.space();
    for (int s = 0; s < 4; ++s) {
        out.identity_on_cavities[static_cast<size_t>(s)] =
            expectation(readout_projector(space, static_cast<BellState>(s), false), state).real();
        out.vacuum_conditioned[static_cast<size_t>(s)] =
            expectation(readout_projector(space, static_cast<BellState>(s), true), state).real();
    }
    return out;
}

}  // namespace

SuccessProbabilities success_probabilities(const DensityState& rho) {
    return probabilities_of(rho);
}

SuccessProbabilities success_probabilities(const PureState& psi) {
    return probabilities_of(psi);
}

TimeDependentHamiltonian protocol_hamiltonian(const SpacePtr& space, const DeviceParams& params) {
    HamiltonianModel model(space, params, assemble_schedule(params));
    return model.time_dependent();
}

namespace {

/// Sum of diagonal populations with subsystem `k` at level `lvl`.
double level_population_density(const Mat& rho, const SpacePtr& space, int k, int lvl) {
    double pop = 0.0;
    for (int i = 0; i < space->dim(); ++i) {
        if ((i / space->stride(k)) % space->subsystem_dim(k) == lvl) pop += rho(i, i).real();
    }
    return pop;
}

double level_population_pure(const Vec& psi, const SpacePtr& space, int k, int lvl) {
    double pop = 0.0;
    for (int i = 0; i < space->dim(); ++i) {
        if ((i / space->stride(k)) % space->subsystem_dim(k) == lvl) pop += std::norm(psi[i]);
    }
    return pop;
}

double double_vacuum_population(const SpacePtr& space, const Vec* psi, const Mat* rho) {
    const int k1 = space->subsystem_index("a1");
    const int k2 = space->subsystem_index("a2");
    double pop = 0.0;
    for (int i = 0; i < space->dim(); ++i) {
        const bool vac = (i / space->stride(k1)) % space->subsystem_dim(k1) == 0 &&
                         (i / space->stride(k2)) % space->subsystem_dim(k2) == 0;
        if (!vac) continue;
        pop += psi ? std::norm((*psi)[i]) : (*rho)(i, i).real();
    }
    return pop;
}

}  // namespace

ProtocolResult run_protocol(const InitialCondition& init, const DeviceParams& params,
                            const DecoherenceSpec& spec, const IntegratorConfig& config,
                            int n_ph) {
    params.validate();
    spec.validate();
    const double fastest = std::sqrt(2.0) * params.max_coupling();
    if (config.dt * fastest > 0.2 + 1e-12) {
        throw std::invalid_argument(
            "dt too coarse: dt * sqrt(2) * g = " + std::to_string(config.dt * fastest) +
            " rad/step exceeds 0.2");
    }

    const auto t_start = std::chrono::steady_clock::now();
    const SpacePtr space = build_space(protocol_layout(n_ph));
    const TimeDependentHamiltonian h = protocol_hamiltonian(space, params);
    const PureState psi0 = protocol_initial_state(space, init);
    const double span = 6.0 * params.T;
    std::vector<double> boundaries;
    for (int k = 0; k <= 6; ++k) boundaries.push_back(params.T * k);

    const bool pure = spec.all_zero();
    const int kA1 = space->subsystem_index("A1");
    const int kA2 = space->subsystem_index("A2");

    auto run_once = [&](double dt) {
        IntegratorConfig local = config;
        local.dt = dt;
        ProtocolResult r;
        r.pure_path = pure;
        r.dt = dt;
        EvolutionStats stats;
        if (pure) {
            auto on_sample = [&](double t, const PureState& s) {
                r.step_ancilla_populations.push_back(
                    {t, level_population_pure(s.amplitudes(), space, kA1, 0),
                     level_population_pure(s.amplitudes(), space, kA1, 1),
                     level_population_pure(s.amplitudes(), space, kA2, 0),
                     level_population_pure(s.amplitudes(), space, kA2, 1)});
            };
            PureState final_state =
                evolve_schrodinger(h, psi0, 0.0, span, local, &stats, boundaries, on_sample);
            const auto probs = success_probabilities(final_state);
            r.probabilities = probs.identity_on_cavities;
            r.vacuum_conditioned = probs.vacuum_conditioned;
            r.cavity_leakage =
                1.0 - double_vacuum_population(space, &final_state.amplitudes(), nullptr);
            r.norm_drift = stats.norm_drift;
        } else {
            const DensityState rho0 = pure_density(psi0);
            auto on_sample = [&](double t, const DensityState& s) {
                r.step_ancilla_populations.push_back(
                    {t, level_population_density(s.matrix(), space, kA1, 0),
                     level_population_density(s.matrix(), space, kA1, 1),
                     level_population_density(s.matrix(), space, kA2, 0),
                     level_population_density(s.matrix(), space, kA2, 1)});
            };
            DensityState final_state =
                evolve_lindblad(h, lindblad_operators(spec, space), rho0, 0.0, span, local,
                                &stats, boundaries, on_sample);
            const auto probs = success_probabilities(final_state);
            r.probabilities = probs.identity_on_cavities;
            r.vacuum_conditioned = probs.vacuum_conditioned;
            r.cavity_leakage =
                1.0 - double_vacuum_population(space, nullptr, &final_state.matrix());
            r.trace_drift = stats.trace_drift;
            r.hermiticity_residual = stats.hermiticity_residual;
            r.min_eigenvalue = stats.min_eigenvalue;
        }
        r.steps = stats.steps;
        return r;
    };

    auto converged = converge(
        run_once, [](const ProtocolResult& r) { return r.probabilities; }, config);
    ProtocolResult result = std::move(converged.result);
    result.halvings = converged.halvings;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

std::string result_to_json(const InitialCondition& init, const DeviceParams& params,
                           const DecoherenceSpec& spec, const ProtocolResult& result) {
    nlohmann::json j;
    j["input"] = init.describe();
    j["params"] = {{"g23A1", params.g23A1}, {"g24A1", params.g24A1}, {"g23A2", params.g23A2},
                   {"g24A2", params.g24A2}, {"gB1", params.gB1},     {"gB2", params.gB2},
                   {"T", params.T},         {"epsilon1", params.epsilon1},
                   {"epsilon2", params.epsilon2}};
    j["rates"] = {{"gamma", spec.gamma}, {"gamma_phi", spec.gamma_phi}, {"kappa", spec.kappa}};
    if (!spec.overrides.empty()) j["rates"]["overrides"] = spec.overrides;
    j["dt"] = result.dt;
    j["halvings"] = result.halvings;
    j["steps"] = result.steps;
    j["pure_path"] = result.pure_path;
    j["probabilities"] = {{"psi+", result.probabilities[0]},
                          {"psi-", result.probabilities[1]},
                          {"phi+", result.probabilities[2]},
                          {"phi-", result.probabilities[3]}};
    j["vacuum_conditioned"] = {{"psi+", result.vacuum_conditioned[0]},
                               {"psi-", result.vacuum_conditioned[1]},
                               {"phi+", result.vacuum_conditioned[2]},
                               {"phi-", result.vacuum_conditioned[3]}};
    nlohmann::json steps_json = nlohmann::json::array();
    for (const auto& row : result.step_ancilla_populations) {
        steps_json.push_back({{"t", row[0]},
                              {"A1_pop0", row[1]},
                              {"A1_pop1", row[2]},
                              {"A2_pop0", row[3]},
                              {"A2_pop1", row[4]}});
    }
    j["diagnostics"] = {{"trace_drift", result.trace_drift},
                        {"norm_drift", result.norm_drift},
                        {"hermiticity_residual", result.hermiticity_residual},
                        {"min_eigenvalue", result.min_eigenvalue},
                        {"cavity_leakage", result.cavity_leakage},
                        {"step_ancilla_populations", steps_json},
                        {"wall_seconds", result.wall_seconds}};
    return j.dump(2);
}

bool CheckReport::all_pass() const {
    for (const auto& row : rows) {
        if (!row.pass) return false;
    }
    return true;
}

std::string CheckReport::to_text() const {
    std::ostringstream out;
    for (const auto& row : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-52s %.10f (>= %.10f)  %s\n", row.name.c_str(),
                      row.value, row.threshold, row.pass ? "pass" : "FAIL");
        out << buf;
    }
    return out.str();
}

namespace {

void add_row(CheckReport& report, const std::string& name, double value, double threshold) {
    report.rows.push_back({name, value, threshold, value >= threshold});
}

}  // namespace

CheckReport verify_truth_tables(const DeviceParams& params, const IntegratorConfig& config) {
    CheckReport report;
    const SpacePtr space = build_space(protocol_layout());
    const TimeDependentHamiltonian h = protocol_hamiltonian(space, params);
    const double T = params.T;
    const int kA1 = space->subsystem_index("A1");

    // Carrier product inputs: expected ancilla A1 level after step 1 and 2.
    struct TableRow {
        int b1, b2, after_step1, after_step2;
    };
    const TableRow table[] = {{0, 0, 1, 0}, {0, 1, 1, 1}, {1, 0, 0, 1}, {1, 1, 0, 0}};
    for (const auto& row : table) {
        std::vector<int> levels(static_cast<size_t>(space->subsystem_count()), 0);
        levels[static_cast<size_t>(space->subsystem_index("B1"))] = row.b1;
        levels[static_cast<size_t>(space->subsystem_index("B2"))] = row.b2;
        const PureState psi0 = product_ket(space, levels);
        std::array<double, 2> pops{};
        const std::vector<double> samples = {T, 2 * T};
        int seen = 0;
        auto on_sample = [&](double, const PureState& s) {
            const int expected = (seen == 0) ? row.after_step1 : row.after_step2;
            pops[static_cast<size_t>(seen)] =
                level_population_pure(s.amplitudes(), space, kA1, expected);
            ++seen;
        };
        evolve_schrodinger(h, psi0, 0.0, 2 * T, config, nullptr, samples, on_sample);
        const std::string base = "table1 |" + std::to_string(row.b1) + std::to_string(row.b2) +
                                 ">: A1 level " + std::to_string(row.after_step1) + " after step 1";
        add_row(report, base, pops[0], 0.999);
        add_row(report,
                "table1 |" + std::to_string(row.b1) + std::to_string(row.b2) + ">: A1 level " +
                    std::to_string(row.after_step2) + " after step 2",
                pops[1], 0.999);
    }

    // Step-3 rotation of the Bell states. The phi+ row maps to -psi-, so its
    // phase is pinned through the sign of the overlap.
    struct MapRow {
        BellState input, target;
        double sign;
    };
    const MapRow maps[] = {{BellState::PsiPlus, BellState::PsiPlus, 1.0},
                           {BellState::PsiMinus, BellState::PhiPlus, 1.0},
                           {BellState::PhiPlus, BellState::PsiMinus, -1.0},
                           {BellState::PhiMinus, BellState::PhiMinus, 1.0}};
    for (const auto& row : maps) {
        const PureState psi0 = protocol_initial_state(space, InitialCondition::from_bell(row.input));
        const PureState out = evolve_schrodinger(h, psi0, 2 * T, 3 * T, config);
        const PureState target =
            protocol_initial_state(space, InitialCondition::from_bell(row.target));
        add_row(report, "step3 " + bell_label(row.input) + " -> " + bell_label(row.target),
                fidelity(target, out), 1.0 - 1e-6);
        const cplx overlap = target.overlap(out);
        add_row(report, "step3 " + bell_label(row.input) + " phase sign",
                row.sign * overlap.real(), 1.0 - 1e-6);
    }
    return report;
}

namespace {

/// Lone three-level B qubit driven through one rotation window.
PureState rotate_single_qubit(RotationDirection direction, const Vec& start) {
    const DeviceParams params = uniform_device(66.0);
    const PulseSchedule schedule = assemble_schedule(params);
    const SpacePtr space = build_space(single_subsystem("B", 3));
    const cplx phase = std::exp(cplx(0.0, -params.epsilon1));
    SparseOperator up = transition_op(space, "B", 0, 1) * phase;
    TimeDependentHamiltonian h;
    h.space = space;
    h.constant = SparseOperator(space);
    const double t0 = direction == RotationDirection::Forward ? 2 * params.T : 5 * params.T;
    h.terms.push_back({up + up.dagger(), [schedule](double t) {
                           return schedule.amplitude(DriveId::OB1, t);
                       }});
    IntegratorConfig cfg;
    cfg.dt = 1e-4 * params.T;
    PureState psi0(space, start);
    return evolve_schrodinger(h, psi0, t0, t0 + params.T, cfg);
}

Vec ket3(int level) {
    Vec v = Vec::Zero(3);
    v[level] = 1.0;
    return v;
}

}  // namespace

CheckReport single_qubit_check(RotationDirection direction) {
    CheckReport report;
    const bool forward = direction == RotationDirection::Forward;
    const std::string tag = forward ? "forward" : "inverse";

    // targets from the +-pi/4 rotation about the drive axis
    Vec t0(3), t1(3);
    if (forward) {
        t0 << kInvSqrt2, kInvSqrt2, 0.0;    // |0> -> (|0>+|1>)/sqrt(2)
        t1 << -kInvSqrt2, kInvSqrt2, 0.0;   // |1> -> -(|0>-|1>)/sqrt(2)
    } else {
        t0 << kInvSqrt2, -kInvSqrt2, 0.0;   // |0> -> (|0>-|1>)/sqrt(2)
        t1 << kInvSqrt2, kInvSqrt2, 0.0;    // |1> -> (|0>+|1>)/sqrt(2)
    }
    const SpacePtr space = build_space(single_subsystem("B", 3));
    for (int lvl = 0; lvl < 2; ++lvl) {
        const PureState out = rotate_single_qubit(direction, ket3(lvl));
        const PureState target(space, lvl == 0 ? t0 : t1);
        const cplx overlap = target.overlap(out);
        add_row(report, tag + " |" + std::to_string(lvl) + "> rotation (with phase)",
                overlap.real(), 1.0 - 1e-8);
    }
    return report;
}

CheckReport single_qubit_check() {
    CheckReport report = single_qubit_check(RotationDirection::Forward);
    CheckReport inverse = single_qubit_check(RotationDirection::Inverse);
    report.rows.insert(report.rows.end(), inverse.rows.begin(), inverse.rows.end());

    const SpacePtr space = build_space(single_subsystem("B", 3));
    for (int lvl = 0; lvl < 2; ++lvl) {
        const PureState mid = rotate_single_qubit(RotationDirection::Forward, ket3(lvl));
        const PureState back = rotate_single_qubit(RotationDirection::Inverse, mid.amplitudes());
        const PureState target(space, ket3(lvl));
        add_row(report, "inverse(forward(|" + std::to_string(lvl) + ">)) identity",
                target.overlap(back).real(), 1.0 - 1e-8);
    }
    return report;
}

}  // namespace bsa
