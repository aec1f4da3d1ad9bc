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

#include "bsa/states.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace bsa {

PureState::PureState(SpacePtr space, Vec amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (!space_) throw std::invalid_argument("pure state needs a space");
    if (amps_.size() != space_->dim()) {
        throw std::invalid_argument("amplitude vector does not match the space dimension");
    }
}

void PureState::normalize() {
    const double n = amps_.norm();
    if (n <= 0.0) throw std::runtime_error("cannot normalize a zero state");
    amps_ /= n;
}

cplx PureState::overlap(const PureState& other) const {
    if (!space_->same_structure(*other.space_)) {
        throw std::invalid_argument("state spaces do not match");
    }
    return amps_.dot(other.amps_);  // Eigen's dot conjugates the left factor
}

PureState product_ket(const SpacePtr& space, const std::vector<int>& levels) {
    Vec amps = Vec::Zero(space->dim());
    amps[space->flat_index(levels)] = 1.0;
    return PureState(space, std::move(amps));
}

DensityState::DensityState(SpacePtr space, Mat matrix)
    : space_(std::move(space)), rho_(std::move(matrix)) {
    if (!space_) throw std::invalid_argument("density state needs a space");
    if (rho_.rows() != space_->dim() || rho_.cols() != space_->dim()) {
        throw std::invalid_argument("density matrix does not match the space dimension");
    }
}

double DensityState::trace_real() const { return rho_.trace().real(); }

double DensityState::hermiticity_residual() const {
    double m = 0.0;
    const int n = static_cast<int>(rho_.rows());
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            m = std::max(m, std::abs(rho_(i, j) - std::conj(rho_(j, i))));
        }
    }
    return m;
}

double DensityState::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityState::hermitize() {
    const int n = static_cast<int>(rho_.rows());
    for (int i = 0; i < n; ++i) {
        rho_(i, i) = cplx(rho_(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (rho_(i, j) + std::conj(rho_(j, i)));
            rho_(i, j) = v;
            rho_(j, i) = std::conj(v);
        }
    }
}

void DensityState::validate(double trace_tol) const {
    if (hermiticity_residual() > 1e-10) {
        throw std::runtime_error("density matrix is not Hermitian within 1e-10");
    }
    if (std::abs(trace_real() - 1.0) > trace_tol) {
        throw std::runtime_error("density matrix trace deviates from 1 beyond tolerance");
    }
    if (min_eigenvalue() < -1e-8) {
        throw std::runtime_error("density matrix has an eigenvalue below -1e-8");
    }
}

DensityState pure_density(const PureState& psi) {
    Mat rho = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityState(psi.space(), std::move(rho));
}

cplx expectation(const SparseOperator& op, const DensityState& rho) {
    if (!op.space()->same_structure(*rho.space())) {
        throw std::invalid_argument("operator and state spaces do not match");
    }
    cplx sum = 0.0;
    for (const auto& e : op.entries()) sum += e.val * rho.matrix()(e.col, e.row);
    return sum;
}

cplx expectation(const SparseOperator& op, const PureState& psi) {
    if (!op.space()->same_structure(*psi.space())) {
        throw std::invalid_argument("operator and state spaces do not match");
    }
    cplx sum = 0.0;
    const Vec& a = psi.amplitudes();
    for (const auto& e : op.entries()) sum += std::conj(a[e.row]) * e.val * a[e.col];
    return sum;
}

DensityState partial_trace(const DensityState& rho, const std::set<std::string>& keep_labels) {
    const auto& space = rho.space();
    if (keep_labels.empty()) throw std::invalid_argument("keep set must be nonempty");
    const int ns = space->subsystem_count();
    std::vector<bool> keep(static_cast<size_t>(ns), false);
    for (const auto& label : keep_labels) {
        keep[static_cast<size_t>(space->subsystem_index(label))] = true;
    }

    SpaceLayout reduced_layout;
    int keep_dim = 1, trace_dim = 1;
    for (int k = 0; k < ns; ++k) {
        if (keep[static_cast<size_t>(k)]) {
            reduced_layout.subsystems.push_back(space->subsystem(k));
            keep_dim *= space->subsystem_dim(k);
        } else {
            trace_dim *= space->subsystem_dim(k);
        }
    }
    auto reduced_space = build_space(reduced_layout);

    // flat index of the full space for each (traced part, kept part) pair
    std::vector<int> full_of(static_cast<size_t>(space->dim()));
    for (int i = 0; i < space->dim(); ++i) {
        auto multi = space->multi_index(i);
        int kpart = 0, tpart = 0;
        for (int k = 0; k < ns; ++k) {
            if (keep[static_cast<size_t>(k)]) {
                kpart = kpart * space->subsystem_dim(k) + multi[static_cast<size_t>(k)];
            } else {
                tpart = tpart * space->subsystem_dim(k) + multi[static_cast<size_t>(k)];
            }
        }
        full_of[static_cast<size_t>(tpart) * static_cast<size_t>(keep_dim) + static_cast<size_t>(kpart)] = i;
    }

    Mat out = Mat::Zero(keep_dim, keep_dim);
    const Mat& in = rho.matrix();
    for (int t = 0; t < trace_dim; ++t) {
        const int* row0 = full_of.data() + static_cast<size_t>(t) * static_cast<size_t>(keep_dim);
        for (int i = 0; i < keep_dim; ++i) {
            for (int j = 0; j < keep_dim; ++j) {
                out(i, j) += in(row0[i], row0[j]);
            }
        }
    }
    return DensityState(reduced_space, std::move(out));
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(a.overlap(b)); }

double fidelity(const DensityState& rho, const PureState& psi) {
    if (!rho.space()->same_structure(*psi.space())) {
        throw std::invalid_argument("state spaces do not match");
    }
    return (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0).real();
}

}  // namespace bsa
