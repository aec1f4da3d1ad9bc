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

#ifndef BSA_HAMILTONIAN_HPP
#define BSA_HAMILTONIAN_HPP

#include <functional>
#include <optional>
#include <vector>

#include "bsa/sparse_op.hpp"
#include "bsa/sta.hpp"

namespace bsa {

/// H(t) = constant + sum_k coeff_k(t) * pattern_k, with fixed sparsity.
/// This is the form every integrator entry point consumes; the patterns
/// are compiled once into a shared CSR structure.
struct TimeDependentHamiltonian {
    SpacePtr space;
    SparseOperator constant;
    struct Term {
        SparseOperator pattern;
        std::function<double(double)> coeff;
    };
    std::vector<Term> terms;

    /// Assembles the operator at one instant (test/reporting path).
    SparseOperator at(double t) const;
};

/// Interaction-picture Hamiltonian of the four-qubit/two-mode device:
/// drive terms on the A and B lines plus the constant cavity couplings.
/// The B-line drives carry the phase factor exp(-i epsilon_j) on |0><1|.
class HamiltonianModel {
  public:
    HamiltonianModel(SpacePtr space, DeviceParams params, PulseSchedule schedule);

    const SpacePtr& space() const { return space_; }
    const DeviceParams& params() const { return params_; }
    const PulseSchedule& schedule() const { return schedule_; }
    const SparseOperator& cavity_part() const { return cavity_; }

    /// Full H(t). Hermitian by construction; throws outside [0, 6T].
    SparseOperator full_hamiltonian(double t) const;

    /// The same content as a compiled time-dependent structure.
    TimeDependentHamiltonian time_dependent() const;

  private:
    SpacePtr space_;
    DeviceParams params_;
    PulseSchedule schedule_;
    SparseOperator cavity_;
    std::vector<SparseOperator> drive_patterns_;  // one Hermitian pattern per line
};

}  // namespace bsa

#endif  // BSA_HAMILTONIAN_HPP
