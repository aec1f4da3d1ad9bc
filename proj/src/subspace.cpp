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

#include "bsa/subspace.hpp"

#include <cmath>
#include <stdexcept>

namespace bsa {

Eigen::MatrixXcd SubspaceModel::drive_part(double omega_a, double omega_b) const {
    return omega_a * drive_a_pattern + omega_b * drive_b_pattern;
}

Eigen::MatrixXcd SubspaceModel::hamiltonian(const PulseSchedule& schedule, double t) const {
    return drive_part(schedule.amplitude(drive_a, t), schedule.amplitude(drive_b, t)) +
           cavity_part;
}

SubspaceModel step_subspace_model(int step_id, const DeviceParams& params) {
    return step_subspace_model(step_id, params, build_space(protocol_layout()));
}

SubspaceModel step_subspace_model(int step_id, const DeviceParams& params, SpacePtr space) {
    params.validate();
    if (step_id != 1 && step_id != 2 && step_id != 4 && step_id != 5) {
        throw std::invalid_argument(
            "step " + std::to_string(step_id) +
            " is a single-qubit rotation and has no cavity subspace model");
    }
    SubspaceModel m;
    m.step_id = step_id;
    m.space = std::move(space);

    const bool ancilla_is_A1 = (step_id == 1 || step_id == 2);
    const bool mode_is_a1 = (step_id == 1 || step_id == 4);
    const std::string A = ancilla_is_A1 ? "A1" : "A2";
    const std::string B = mode_is_a1 ? "B1" : "B2";
    const std::string mode = mode_is_a1 ? "a1" : "a2";
    const int excited = mode_is_a1 ? 3 : 4;  // ancilla level the drives reach

    switch (step_id) {
        case 1:
            m.drive_a = DriveId::O03A1;
            m.drive_b = DriveId::O13A1;
            m.gA = params.g23A1;
            break;
        case 2:
            m.drive_a = DriveId::O04A1;
            m.drive_b = DriveId::O14A1;
            m.gA = params.g24A1;
            break;
        case 4:
            m.drive_a = DriveId::O03A2;
            m.drive_b = DriveId::O13A2;
            m.gA = params.g23A2;
            break;
        case 5:
            m.drive_a = DriveId::O04A2;
            m.drive_b = DriveId::O14A2;
            m.gA = params.g24A2;
            break;
        default: break;
    }
    m.gB = mode_is_a1 ? params.gB1 : params.gB2;

    // Level tuples (ancilla, carrier, photon) in the model's basis order.
    const int basis_levels[9][3] = {
        {0, 0, 0}, {excited, 0, 0}, {2, 0, 1}, {2, 2, 0}, {1, 0, 0},
        {0, 1, 0}, {excited, 1, 0}, {2, 1, 1}, {1, 1, 0},
    };
    const int kA = m.space->subsystem_index(A);
    const int kB = m.space->subsystem_index(B);
    const int kMode = m.space->subsystem_index(mode);
    for (int i = 0; i < 9; ++i) {
        std::vector<int> levels(static_cast<size_t>(m.space->subsystem_count()), 0);
        levels[static_cast<size_t>(kA)] = basis_levels[i][0];
        levels[static_cast<size_t>(kB)] = basis_levels[i][1];
        levels[static_cast<size_t>(kMode)] = basis_levels[i][2];
        m.basis.push_back(product_ket(m.space, levels));
        m.basis_labels.push_back("|" + std::to_string(basis_levels[i][0]) + ">" + A + "|" +
                                 std::to_string(basis_levels[i][1]) + ">" + B + "|" +
                                 std::to_string(basis_levels[i][2]) + ">" + mode);
    }

    auto sym = [](Eigen::MatrixXcd& h, int i, int j, double v) {
        h(i, j) += v;
        h(j, i) += v;
    };
    m.drive_a_pattern = Eigen::MatrixXcd::Zero(9, 9);
    sym(m.drive_a_pattern, 0, 1, 1.0);  // |0>B branch
    sym(m.drive_a_pattern, 5, 6, 1.0);  // |1>B branch
    m.drive_b_pattern = Eigen::MatrixXcd::Zero(9, 9);
    sym(m.drive_b_pattern, 4, 1, 1.0);
    sym(m.drive_b_pattern, 8, 6, 1.0);
    m.cavity_part = Eigen::MatrixXcd::Zero(9, 9);
    sym(m.cavity_part, 1, 2, m.gA);
    sym(m.cavity_part, 6, 7, m.gA);
    sym(m.cavity_part, 3, 2, m.gB);
    return m;
}

EffectiveModel effective_model(const SubspaceModel& model) {
    EffectiveModel e;
    const double norm = std::sqrt(model.gA * model.gA + model.gB * model.gB);
    e.coupling_scale = model.gB / norm;
    e.dark_coefficients << model.gB / norm, -model.gA / norm;
    e.chain1 = Eigen::VectorXcd::Zero(9);
    e.chain1(0) = 1.0;
    e.chain2 = Eigen::VectorXcd::Zero(9);
    e.chain2(1) = e.dark_coefficients(0);
    e.chain2(3) = e.dark_coefficients(1);
    e.chain3 = Eigen::VectorXcd::Zero(9);
    e.chain3(4) = 1.0;
    return e;
}

EffectiveCoefficients effective_hamiltonian(const SubspaceModel& model,
                                            const PulseSchedule& schedule, double t) {
    EffectiveCoefficients c;
    const double scale = effective_model(model).coupling_scale;
    const double om_a = schedule.amplitude(model.drive_a, t);
    const double om_b = schedule.amplitude(model.drive_b, t);
    c.omega_1dark = scale * om_a;
    c.omega_5dark = scale * om_b;
    const double limit = std::min(model.gA, model.gB) / 5.0;
    c.amplitude_warning = std::max(std::abs(om_a), std::abs(om_b)) > limit;
    return c;
}

Eigen::Matrix3cd effective_chain_hamiltonian(const SubspaceModel& model,
                                             const PulseSchedule& schedule, double t) {
    const EffectiveCoefficients c = effective_hamiltonian(model, schedule, t);
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 1) = c.omega_1dark;
    h(1, 0) = c.omega_1dark;
    h(2, 1) = c.omega_5dark;
    h(1, 2) = c.omega_5dark;
    return h;
}

Eigen::VectorXcd dense_rk4(const std::function<Eigen::MatrixXcd(double)>& hamiltonian,
                           Eigen::VectorXcd psi0, double t0, double t1, int steps) {
    const cplx mi(0.0, -1.0);
    const double dt = (t1 - t0) / steps;
    Eigen::VectorXcd psi = std::move(psi0);
    for (int n = 0; n < steps; ++n) {
        const double t = t0 + n * dt;
        const Eigen::VectorXcd k1 = mi * (hamiltonian(t) * psi);
        const Eigen::VectorXcd k2 = mi * (hamiltonian(t + dt / 2) * (psi + (dt / 2) * k1));
        const Eigen::VectorXcd k3 = mi * (hamiltonian(t + dt / 2) * (psi + (dt / 2) * k2));
        const Eigen::VectorXcd k4 = mi * (hamiltonian(t + dt) * (psi + dt * k3));
        psi += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return psi;
}

EffectiveComparison compare_effective(const DeviceParams& params, int step_id, int steps) {
    const SubspaceModel model = step_subspace_model(step_id, params);
    const PulseSchedule schedule = assemble_schedule(params);
    const double T = params.T;
    const double t0 = (step_id - 1) * T;  // steps 4/5 live on [3T,4T] and [4T,5T]
    const double start = (step_id == 4) ? 3 * T : (step_id == 5) ? 4 * T : t0;

    Eigen::VectorXcd full0 = Eigen::VectorXcd::Zero(9);
    full0(0) = 1.0;
    const Eigen::VectorXcd full_final = dense_rk4(
        [&](double t) { return model.hamiltonian(schedule, t); }, full0, start, start + T, steps);

    Eigen::VectorXcd eff0 = Eigen::VectorXcd::Zero(3);
    eff0(0) = 1.0;
    const Eigen::VectorXcd eff_final =
        dense_rk4([&](double t) { return Eigen::MatrixXcd(effective_chain_hamiltonian(model, schedule, t)); },
                  eff0, start, start + T, steps);

    EffectiveComparison out;
    out.g = model.gA;
    out.full_pop_start = std::norm(full_final(0));
    out.full_pop_end = std::norm(full_final(4));
    out.eff_pop_start = std::norm(eff_final(0));
    out.eff_pop_end = std::norm(eff_final(2));
    out.max_deviation = std::max(std::abs(out.full_pop_start - out.eff_pop_start),
                                 std::abs(out.full_pop_end - out.eff_pop_end));
    return out;
}

}  // namespace bsa
