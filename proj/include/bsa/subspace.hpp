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

#ifndef BSA_SUBSPACE_HPP
#define BSA_SUBSPACE_HPP

#include <functional>
#include <string>
#include <vector>

#include "bsa/hamiltonian.hpp"
#include "bsa/states.hpp"

namespace bsa {

/// Nine-state model of one cavity-assisted step. The basis contains the
/// product kets the step actually explores (both branches of the carrier
/// qubit); everything else in the composite space stays idle.
///
/// Basis order, for the active ancilla A, carrier B and mode a:
///   0: |0>A |0>B vac      3: |2>A |2>B vac      6: |e>A |1>B vac
///   1: |e>A |0>B vac      4: |1>A |0>B vac      7: |2>A |1>B one photon
///   2: |2>A |0>B one ph   5: |0>A |1>B vac      8: |1>A |1>B vac
/// where e = 3 for the a1-assisted steps (1, 4) and e = 4 for steps 2, 5.
class SubspaceModel {
  public:
    int step_id = 0;                       // 1, 2, 4 or 5
    SpacePtr space;                        // full composite space
    std::vector<PureState> basis;          // nine kets, orthonormal
    std::vector<std::string> basis_labels;
    Eigen::MatrixXcd drive_a_pattern;      // multiplies the 0<->e line amplitude
    Eigen::MatrixXcd drive_b_pattern;      // multiplies the 1<->e line amplitude
    Eigen::MatrixXcd cavity_part;          // constant coupling block
    DriveId drive_a = DriveId::O03A1;
    DriveId drive_b = DriveId::O13A1;
    double gA = 0.0;                       // ancilla-mode coupling for this step
    double gB = 0.0;                       // carrier-mode coupling for this step

    /// 9x9 Hamiltonian at absolute time t, using the step's drive lines.
    Eigen::MatrixXcd hamiltonian(const PulseSchedule& schedule, double t) const;

    /// Drive part evaluated with explicit amplitudes (picture-free tests).
    Eigen::MatrixXcd drive_part(double omega_a, double omega_b) const;
};

/// Builds the model for one of the cavity-assisted steps. Steps 3 and 6
/// are single-qubit rotations and are rejected here.
SubspaceModel step_subspace_model(int step_id, const DeviceParams& params);
SubspaceModel step_subspace_model(int step_id, const DeviceParams& params, SpacePtr space);

/// Three-state reduction riding on the dark state of the cavity part.
struct EffectiveModel {
    double coupling_scale = 0.0;          // gB / sqrt(gA^2 + gB^2)
    Eigen::Vector2d dark_coefficients;    // dark state over (basis 1, basis 3)
    Eigen::VectorXcd chain1, chain2, chain3;  // psi1, dark, psi5 in the 9-basis
};
EffectiveModel effective_model(const SubspaceModel& model);

/// Coefficients of the two-coupling chain Hamiltonian at absolute time t:
///   scale * (omega_a |chain1><chain2| + omega_b |chain3><chain2|) + h.c.
struct EffectiveCoefficients {
    double omega_1dark = 0.0;
    double omega_5dark = 0.0;
    bool amplitude_warning = false;  // drive amplitude above couplings/5
};
EffectiveCoefficients effective_hamiltonian(const SubspaceModel& model,
                                            const PulseSchedule& schedule, double t);

/// 3x3 chain Hamiltonian of the reduction at absolute time t.
Eigen::Matrix3cd effective_chain_hamiltonian(const SubspaceModel& model,
                                             const PulseSchedule& schedule, double t);

/// Fixed-step RK4 on a small dense system i psi' = H(t) psi.
Eigen::VectorXcd dense_rk4(const std::function<Eigen::MatrixXcd(double)>& hamiltonian,
                           Eigen::VectorXcd psi0, double t0, double t1, int steps);

/// Populations of the step's start/end chain states after one step,
/// from the nine-state model and from the three-state reduction.
struct EffectiveComparison {
    double g = 0.0;
    double full_pop_start = 0.0, full_pop_end = 0.0;
    double eff_pop_start = 0.0, eff_pop_end = 0.0;
    double max_deviation = 0.0;
};
EffectiveComparison compare_effective(const DeviceParams& params, int step_id = 1,
                                      int steps = 20000);

}  // namespace bsa

#endif  // BSA_SUBSPACE_HPP
