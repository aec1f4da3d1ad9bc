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

#ifndef BSA_SPARSE_OP_HPP
#define BSA_SPARSE_OP_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "bsa/space.hpp"

namespace bsa {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
// Row-major so that sparse-times-dense kernels stream whole rows.
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Complex sparse operator on a composite Hilbert space.
///
/// Entries are kept sorted by (row, col) with duplicates merged and exact
/// zeros dropped. Operators are immutable in spirit: algebra returns new
/// values, so sharing across threads is safe.
class SparseOperator {
  public:
    struct Entry {
        int row = 0;
        int col = 0;
        cplx val;
    };

    SparseOperator() = default;
    explicit SparseOperator(SpacePtr space) : space_(std::move(space)) {}
    SparseOperator(SpacePtr space, std::vector<Entry> entries);

    const SpacePtr& space() const { return space_; }
    int dim() const { return space_ ? space_->dim() : 0; }
    const std::vector<Entry>& entries() const { return entries_; }
    size_t nnz() const { return entries_.size(); }

    SparseOperator dagger() const;
    SparseOperator operator+(const SparseOperator& other) const;
    SparseOperator operator-(const SparseOperator& other) const;
    SparseOperator operator*(const SparseOperator& other) const;
    SparseOperator operator*(cplx scalar) const;
    friend SparseOperator operator*(cplx scalar, const SparseOperator& op) { return op * scalar; }

    Vec apply(const Vec& v) const;

    cplx coeff(int row, int col) const;
    Mat to_dense() const;

    double max_abs() const;
    double frobenius_norm() const;
    bool is_hermitian(double tol = 1e-12) const;

    /// True when every entry sits on the diagonal.
    bool is_diagonal() const;

  private:
    SpacePtr space_;
    std::vector<Entry> entries_;
};

/// Identity on the whole space.
SparseOperator identity_op(const SpacePtr& space);

/// Embeds a local operator (living on a single-subsystem space whose
/// dimension matches `target_label`) into the composite space, acting as
/// the identity on every other factor.
SparseOperator embed(const SparseOperator& local, const std::string& target_label,
                     const SpacePtr& space);

/// |a><b| on subsystem `label`, embedded into the composite space.
SparseOperator transition_op(const SpacePtr& space, const std::string& label, int a, int b);

/// Photon annihilation operator on subsystem `label`, embedded.
SparseOperator annihilation_op(const SpacePtr& space, const std::string& label);

/// sum_i d_i |i><i| on subsystem `label`, embedded.
SparseOperator diagonal_op(const SpacePtr& space, const std::string& label,
                           const std::vector<double>& diag);

}  // namespace bsa

#endif  // BSA_SPARSE_OP_HPP
