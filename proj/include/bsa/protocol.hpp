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

#ifndef BSA_PROTOCOL_HPP
#define BSA_PROTOCOL_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bsa/integrator.hpp"
#include "bsa/subspace.hpp"

namespace bsa {

/// The four Bell states of the carrier pair, in reporting order.
enum class BellState { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };
std::string bell_label(BellState s);           // "psi+", "psi-", "phi+", "phi-"
BellState parse_bell(const std::string& name);

/// Carrier-pair input: one of the Bell states, or an arbitrary normalized
/// vector over |00>, |01>, |10>, |11> of B1 B2. Ancillas start in |0>,
/// both cavity modes in vacuum.
struct InitialCondition {
    std::optional<BellState> bell;
    std::array<cplx, 4> amplitudes{};  // used when bell is not set

    static InitialCondition from_bell(BellState s);
    static InitialCondition from_amplitudes(const std::array<cplx, 4>& amps);
    std::array<cplx, 4> carrier_amplitudes() const;
    std::string describe() const;
};

/// Amplitudes of one Bell state over |00>, |01>, |10>, |11>.
std::array<cplx, 4> bell_amplitudes(BellState s);

/// The full-space initial ket for a protocol run.
PureState protocol_initial_state(const SpacePtr& space, const InitialCondition& init);

/// Readout ket for one Bell state: the ancilla pattern that flags it,
/// tensored with the Bell state itself (cavity factors excluded).
/// Patterns: psi+ -> |00>, psi- -> |01>, phi+ -> |10>, phi- -> |11>.
struct SuccessProbabilities {
    std::array<double, 4> identity_on_cavities{};  // the reported values
    std::array<double, 4> vacuum_conditioned{};    // diagnostic variant
};
SuccessProbabilities success_probabilities(const DensityState& rho);
SuccessProbabilities success_probabilities(const PureState& psi);

/// Projector onto one readout ket, as identity (or vacuum) on the cavities.
SparseOperator readout_projector(const SpacePtr& space, BellState s, bool vacuum_conditioned);

/// Drive lines + cavity couplings for a protocol run on `space`.
TimeDependentHamiltonian protocol_hamiltonian(const SpacePtr& space, const DeviceParams& params);

struct ProtocolResult {
    std::array<double, 4> probabilities{};       // P(psi+), P(psi-), P(phi+), P(phi-)
    std::array<double, 4> vacuum_conditioned{};  // cavity-vacuum diagnostic variant
    double trace_drift = 0.0;
    double norm_drift = 0.0;
    double hermiticity_residual = 0.0;
    double min_eigenvalue = 1.0;
    double cavity_leakage = 0.0;  // population outside double vacuum at 6T
    // rows (t, pop A1|0>, pop A1|1>, pop A2|0>, pop A2|1>) at step boundaries
    std::vector<std::array<double, 5>> step_ancilla_populations;
    double dt = 0.0;
    int halvings = 0;
    long steps = 0;
    bool pure_path = false;
    double wall_seconds = 0.0;
};

/// Runs the six-step analysis end to end with dt-halving convergence.
/// Uses the pure-state fast path automatically when every rate is zero.
ProtocolResult run_protocol(const InitialCondition& init, const DeviceParams& params,
                            const DecoherenceSpec& spec, const IntegratorConfig& config,
                            int n_ph = 2);

/// JSON record of a run (inputs, rates, integration settings, results).
std::string result_to_json(const InitialCondition& init, const DeviceParams& params,
                           const DecoherenceSpec& spec, const ProtocolResult& result);

struct CheckRow {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;  // value >= threshold
};
struct CheckReport {
    std::vector<CheckRow> rows;
    bool all_pass() const;
    std::string to_text() const;
};

/// Step 1-2 carrier truth table (ancilla populations >= 0.999) and the
/// step-3 Bell-state rotation map (ray fidelity >= 1 - 1e-6, with the
/// explicit sign of the phi+ row checked through the relative phase).
CheckReport verify_truth_tables(const DeviceParams& params, const IntegratorConfig& config);

/// Single B-qubit rotation check: forward (area +pi/4) and inverse
/// (area -pi/4) transformations, plus inverse-after-forward identity.
enum class RotationDirection { Forward, Inverse };
CheckReport single_qubit_check(RotationDirection direction);
CheckReport single_qubit_check();  // both directions plus the composition

}  // namespace bsa

#endif  // BSA_PROTOCOL_HPP
