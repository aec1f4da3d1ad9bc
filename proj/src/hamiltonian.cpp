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

#include "bsa/hamiltonian.hpp"

#include <stdexcept>

namespace bsa {

SparseOperator TimeDependentHamiltonian::at(double t) const {
    SparseOperator h = constant;
    for (const auto& term : terms) {
        const double c = term.coeff(t);
        if (c != 0.0) h = h + term.pattern * cplx(c, 0.0);
    }
    return h;
}

namespace {

/// |a><b| + |b><a| on one subsystem, embedded.
SparseOperator drive_pattern(const SpacePtr& space, const std::string& label, int a, int b) {
    SparseOperator up = transition_op(space, label, a, b);
    return up + up.dagger();
}

/// exp(-i eps)|0><1| + exp(+i eps)|1><0| on one subsystem, embedded.
SparseOperator b_drive_pattern(const SpacePtr& space, const std::string& label, double eps) {
    const cplx phase = std::exp(cplx(0.0, -eps));
    SparseOperator up = transition_op(space, label, 0, 1) * phase;
    return up + up.dagger();
}

SparseOperator cavity_hamiltonian(const SpacePtr& space, const DeviceParams& p) {
    auto term = [&](const std::string& qubit, int upper, const std::string& mode, double g) {
        // g |upper><2| a_mode + h.c.
        SparseOperator raise = transition_op(space, qubit, upper, 2);
        SparseOperator a = annihilation_op(space, mode);
        SparseOperator t = (raise * a) * cplx(g, 0.0);
        return t + t.dagger();
    };
    SparseOperator h = term("A1", 3, "a1", p.g23A1) + term("A1", 4, "a2", p.g24A1) +
                       term("A2", 3, "a1", p.g23A2) + term("A2", 4, "a2", p.g24A2);
    // B_j couples |2><0| to its own mode a_j.
    auto bterm = [&](const std::string& qubit, const std::string& mode, double g) {
        SparseOperator raise = transition_op(space, qubit, 2, 0);
        SparseOperator a = annihilation_op(space, mode);
        SparseOperator t = (raise * a) * cplx(g, 0.0);
        return t + t.dagger();
    };
    return h + bterm("B1", "a1", p.gB1) + bterm("B2", "a2", p.gB2);
}

}  // namespace

HamiltonianModel::HamiltonianModel(SpacePtr space, DeviceParams params, PulseSchedule schedule)
    : space_(std::move(space)),
      params_(std::move(params)),
      schedule_(std::move(schedule)),
      cavity_(space_) {
    params_.validate();
    cavity_ = cavity_hamiltonian(space_, params_);
    drive_patterns_.reserve(kDriveCount);
    drive_patterns_.push_back(drive_pattern(space_, "A1", 0, 3));
    drive_patterns_.push_back(drive_pattern(space_, "A1", 1, 3));
    drive_patterns_.push_back(drive_pattern(space_, "A1", 0, 4));
    drive_patterns_.push_back(drive_pattern(space_, "A1", 1, 4));
    drive_patterns_.push_back(drive_pattern(space_, "A2", 0, 3));
    drive_patterns_.push_back(drive_pattern(space_, "A2", 1, 3));
    drive_patterns_.push_back(drive_pattern(space_, "A2", 0, 4));
    drive_patterns_.push_back(drive_pattern(space_, "A2", 1, 4));
    drive_patterns_.push_back(b_drive_pattern(space_, "B1", params_.epsilon1));
    drive_patterns_.push_back(b_drive_pattern(space_, "B2", params_.epsilon2));
}

SparseOperator HamiltonianModel::full_hamiltonian(double t) const {
    SparseOperator h = cavity_;
    for (DriveId id : all_drives()) {
        const double amp = schedule_.amplitude(id, t);
        if (amp != 0.0) h = h + drive_patterns_[static_cast<size_t>(int(id))] * cplx(amp, 0.0);
    }
    return h;
}

TimeDependentHamiltonian HamiltonianModel::time_dependent() const {
    TimeDependentHamiltonian h;
    h.space = space_;
    h.constant = cavity_;
    for (DriveId id : all_drives()) {
        const PulseSchedule sched = schedule_;
        h.terms.push_back({drive_patterns_[static_cast<size_t>(int(id))],
                           [sched, id](double t) { return sched.amplitude(id, t); }});
    }
    return h;
}

}  // namespace bsa
