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

#include "bsa/sparse_op.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsa {

namespace {

void require_same_space(const SparseOperator& a, const SparseOperator& b) {
    if (!a.space() || !b.space() || !a.space()->same_structure(*b.space())) {
        throw std::invalid_argument("operator spaces do not match");
    }
}

std::vector<SparseOperator::Entry> canonicalize(std::vector<SparseOperator::Entry> entries,
                                                int dim) {
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= dim || e.col < 0 || e.col >= dim) {
            throw std::out_of_range("sparse entry outside the composite dimension");
        }
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<SparseOperator::Entry> merged;
    merged.reserve(entries.size());
    for (const auto& e : entries) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
            merged.back().val += e.val;
        } else {
            merged.push_back(e);
        }
    }
    std::erase_if(merged, [](const auto& e) { return e.val == cplx(0.0, 0.0); });
    return merged;
}

}  // namespace

SparseOperator::SparseOperator(SpacePtr space, std::vector<Entry> entries)
    : space_(std::move(space)) {
    if (!space_) throw std::invalid_argument("sparse operator needs a space");
    entries_ = canonicalize(std::move(entries), space_->dim());
}

SparseOperator SparseOperator::dagger() const {
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back({e.col, e.row, std::conj(e.val)});
    return SparseOperator(space_, std::move(out));
}

SparseOperator SparseOperator::operator+(const SparseOperator& other) const {
    require_same_space(*this, other);
    std::vector<Entry> out = entries_;
    out.insert(out.end(), other.entries_.begin(), other.entries_.end());
    return SparseOperator(space_, std::move(out));
}

SparseOperator SparseOperator::operator-(const SparseOperator& other) const {
    return *this + other * cplx(-1.0, 0.0);
}

SparseOperator SparseOperator::operator*(cplx scalar) const {
    std::vector<Entry> out = entries_;
    for (auto& e : out) e.val *= scalar;
    return SparseOperator(space_, std::move(out));
}

SparseOperator SparseOperator::operator*(const SparseOperator& other) const {
    require_same_space(*this, other);
    // Row-sorted entries: walk rows of `this`, scatter rows of `other`.
    std::vector<Entry> out;
    size_t row_begin = 0;
    const auto& b = other.entries_;
    // Index of the first entry of each row of `other`.
    std::vector<int> b_row_start(static_cast<size_t>(dim()) + 1, -1);
    for (size_t i = b.size(); i-- > 0;) b_row_start[static_cast<size_t>(b[i].row)] = static_cast<int>(i);
    b_row_start[static_cast<size_t>(dim())] = static_cast<int>(b.size());
    while (row_begin < entries_.size()) {
        size_t row_end = row_begin;
        const int row = entries_[row_begin].row;
        while (row_end < entries_.size() && entries_[row_end].row == row) ++row_end;
        for (size_t i = row_begin; i < row_end; ++i) {
            const int k = entries_[i].col;
            int j = b_row_start[static_cast<size_t>(k)];
            if (j < 0) continue;
            for (; j < static_cast<int>(b.size()) && b[static_cast<size_t>(j)].row == k; ++j) {
                out.push_back({row, b[static_cast<size_t>(j)].col,
                               entries_[i].val * b[static_cast<size_t>(j)].val});
            }
        }
        row_begin = row_end;
    }
    return SparseOperator(space_, std::move(out));
}

Vec SparseOperator::apply(const Vec& v) const {
    if (v.size() != dim()) throw std::invalid_argument("vector dimension mismatch");
    Vec out = Vec::Zero(dim());
    for (const auto& e : entries_) out[e.row] += e.val * v[e.col];
    return out;
}

cplx SparseOperator::coeff(int row, int col) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{row, col, {}},
                               [](const auto& a, const auto& b) {
                                   return a.row != b.row ? a.row < b.row : a.col < b.col;
                               });
    if (it != entries_.end() && it->row == row && it->col == col) return it->val;
    return {0.0, 0.0};
}

Mat SparseOperator::to_dense() const {
    Mat out = Mat::Zero(dim(), dim());
    for (const auto& e : entries_) out(e.row, e.col) += e.val;
    return out;
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.val));
    return m;
}

double SparseOperator::frobenius_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e.val);
    return std::sqrt(s);
}

bool SparseOperator::is_hermitian(double tol) const {
    SparseOperator diff = *this - dagger();
    return diff.max_abs() <= tol;
}

bool SparseOperator::is_diagonal() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& e) { return e.row == e.col; });
}

SparseOperator identity_op(const SpacePtr& space) {
    std::vector<SparseOperator::Entry> entries;
    entries.reserve(static_cast<size_t>(space->dim()));
    for (int i = 0; i < space->dim(); ++i) entries.push_back({i, i, {1.0, 0.0}});
    return SparseOperator(space, std::move(entries));
}

SparseOperator embed(const SparseOperator& local, const std::string& target_label,
                     const SpacePtr& space) {
    if (!local.space()) throw std::invalid_argument("local operator needs a space");
    const int k = space->subsystem_index(target_label);
    const int d = space->subsystem_dim(k);
    if (local.dim() != d) {
        throw std::invalid_argument("local operator dimension " + std::to_string(local.dim()) +
                                    " does not match subsystem '" + target_label + "' (dim " +
                                    std::to_string(d) + ")");
    }
    const int inner = space->stride(k);       // block size below the subsystem
    const int block = inner * d;              // one full subsystem block
    const int outer = space->dim() / block;   // repetitions above the subsystem
    std::vector<SparseOperator::Entry> out;
    out.reserve(local.nnz() * static_cast<size_t>(space->dim() / d));
    for (const auto& e : local.entries()) {
        for (int o = 0; o < outer; ++o) {
            const int row0 = o * block + e.row * inner;
            const int col0 = o * block + e.col * inner;
            for (int q = 0; q < inner; ++q) out.push_back({row0 + q, col0 + q, e.val});
        }
    }
    return SparseOperator(space, std::move(out));
}

SparseOperator transition_op(const SpacePtr& space, const std::string& label, int a, int b) {
    const int d = space->subsystem_dim(space->subsystem_index(label));
    auto local_space = build_space(single_subsystem(label, d));
    SparseOperator local(local_space, {{a, b, {1.0, 0.0}}});
    return embed(local, label, space);
}

SparseOperator annihilation_op(const SpacePtr& space, const std::string& label) {
    const int d = space->subsystem_dim(space->subsystem_index(label));
    std::vector<SparseOperator::Entry> entries;
    for (int n = 1; n < d; ++n) entries.push_back({n - 1, n, {std::sqrt(double(n)), 0.0}});
    SparseOperator local(build_space(single_subsystem(label, d)), std::move(entries));
    return embed(local, label, space);
}

SparseOperator diagonal_op(const SpacePtr& space, const std::string& label,
                           const std::vector<double>& diag) {
    const int d = space->subsystem_dim(space->subsystem_index(label));
    if (static_cast<int>(diag.size()) != d) {
        throw std::invalid_argument("diagonal length does not match subsystem dimension");
    }
    std::vector<SparseOperator::Entry> entries;
    for (int i = 0; i < d; ++i) {
        if (diag[static_cast<size_t>(i)] != 0.0) entries.push_back({i, i, {diag[static_cast<size_t>(i)], 0.0}});
    }
    SparseOperator local(build_space(single_subsystem(label, d)), std::move(entries));
    return embed(local, label, space);
}

}  // namespace bsa
