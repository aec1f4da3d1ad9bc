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

#ifndef BSA_STATES_HPP
#define BSA_STATES_HPP

#include <set>
#include <string>

#include "bsa/sparse_op.hpp"

namespace bsa {

/// Unit-norm complex vector over a composite space.
class PureState {
  public:
    PureState(SpacePtr space, Vec amplitudes);

    const SpacePtr& space() const { return space_; }
    const Vec& amplitudes() const { return amps_; }
    Vec& amplitudes() { return amps_; }
    int dim() const { return space_->dim(); }

    double norm() const { return amps_.norm(); }
    void normalize();

    cplx overlap(const PureState& other) const;  // <this|other>

  private:
    SpacePtr space_;
    Vec amps_;
};

/// Product basis ket |levels[0], levels[1], ...> in layout order.
PureState product_ket(const SpacePtr& space, const std::vector<int>& levels);

/// Hermitian unit-trace complex matrix over a composite space.
class DensityState {
  public:
    DensityState(SpacePtr space, Mat matrix);

    const SpacePtr& space() const { return space_; }
    const Mat& matrix() const { return rho_; }
    Mat& matrix() { return rho_; }
    int dim() const { return space_->dim(); }

    double trace_real() const;
    double hermiticity_residual() const;  // max |rho - rho^dagger| element
    double min_eigenvalue() const;        // full Hermitian eigensolve
    void hermitize();                     // rho <- (rho + rho^dagger) / 2

    /// Throws when Hermiticity (1e-10), trace (tol) or positivity (-1e-8)
    /// are violated beyond the stated tolerances.
    void validate(double trace_tol = 1e-6) const;

  private:
    SpacePtr space_;
    Mat rho_;
};

DensityState pure_density(const PureState& psi);

/// tr(op * rho). Real within 1e-10 for Hermitian op and valid rho.
cplx expectation(const SparseOperator& op, const DensityState& rho);
/// <psi| op |psi>.
cplx expectation(const SparseOperator& op, const PureState& psi);

/// Reduced density matrix over `keep_labels` (original layout order kept).
/// Trace is preserved; Hermitian input stays Hermitian.
DensityState partial_trace(const DensityState& rho, const std::set<std::string>& keep_labels);

/// Uhlmann fidelity |<a|b>|^2 between pure states.
double fidelity(const PureState& a, const PureState& b);
/// <psi| rho |psi>.
double fidelity(const DensityState& rho, const PureState& psi);

}  // namespace bsa

#endif  // BSA_STATES_HPP
