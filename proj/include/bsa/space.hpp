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

#ifndef BSA_SPACE_HPP
#define BSA_SPACE_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bsa {

/// One tensor factor of the composite Hilbert space.
struct Subsystem {
    std::string label;
    int dim = 0;
};

/// Ordered list of subsystems. The order is significant: it fixes the
/// flat-index convention for every operator and state in the program.
struct SpaceLayout {
    std::vector<Subsystem> subsystems;

    bool operator==(const SpaceLayout& other) const;
};

/// Composite Hilbert space with a precomputed stride table.
///
/// Flat indices are "first subsystem most significant": for a layout
/// (s0, s1, ..., sn) with dims (d0, d1, ..., dn),
///     flat = i0*stride(0) + i1*stride(1) + ... + in*stride(n),
/// where stride(k) = d_{k+1} * d_{k+2} * ... * dn and stride(n) = 1.
/// State dumps and density-matrix indices always follow this convention,
/// so results from different runs are directly comparable.
class HilbertSpace {
  public:
    explicit HilbertSpace(SpaceLayout layout);

    const SpaceLayout& layout() const { return layout_; }
    int dim() const { return dim_; }
    int subsystem_count() const { return static_cast<int>(layout_.subsystems.size()); }

    /// Index of the subsystem carrying `label`; throws if unknown.
    int subsystem_index(const std::string& label) const;
    const Subsystem& subsystem(int k) const { return layout_.subsystems.at(static_cast<size_t>(k)); }
    int subsystem_dim(int k) const { return subsystem(k).dim; }
    int stride(int k) const { return strides_.at(static_cast<size_t>(k)); }

    int flat_index(std::span<const int> multi) const;
    std::vector<int> multi_index(int flat) const;

    /// Structural equality: same labels and dims in the same order.
    bool same_structure(const HilbertSpace& other) const { return layout_ == other.layout_; }

  private:
    SpaceLayout layout_;
    std::vector<int> strides_;
    int dim_ = 0;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

/// Builds the composite space. Rejects dims < 2, duplicate or empty labels.
SpacePtr build_space(const SpaceLayout& layout);

/// Canonical layout for the analysis protocol, in the order
/// A1 (5), A2 (5), B1 (3), B2 (3), a1 (n_ph), a2 (n_ph).
/// n_ph is the per-mode photon-space dimension (truncation + 1).
SpaceLayout protocol_layout(int n_ph = 2);

/// Single-subsystem layout, used for local operators before embedding.
SpaceLayout single_subsystem(const std::string& label, int dim);

}  // namespace bsa

#endif  // BSA_SPACE_HPP
