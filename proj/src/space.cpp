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

#include "bsa/space.hpp"

#include <set>
#include <stdexcept>

namespace bsa {

bool SpaceLayout::operator==(const SpaceLayout& other) const {
    if (subsystems.size() != other.subsystems.size()) return false;
    for (size_t k = 0; k < subsystems.size(); ++k) {
        if (subsystems[k].label != other.subsystems[k].label) return false;
        if (subsystems[k].dim != other.subsystems[k].dim) return false;
    }
    return true;
}

HilbertSpace::HilbertSpace(SpaceLayout layout) : layout_(std::move(layout)) {
    if (layout_.subsystems.empty()) {
        throw std::invalid_argument("space layout has no subsystems");
    }
    std::set<std::string> seen;
    for (const auto& s : layout_.subsystems) {
        if (s.label.empty()) {
            throw std::invalid_argument("subsystem label must be nonempty");
        }
        if (s.dim < 2) {
            throw std::invalid_argument("subsystem '" + s.label +
                                        "' has dimension " + std::to_string(s.dim) +
                                        "; every subsystem needs dim >= 2");
        }
        if (!seen.insert(s.label).second) {
            throw std::invalid_argument("duplicate subsystem label '" + s.label + "'");
        }
    }
    const size_t n = layout_.subsystems.size();
    strides_.assign(n, 1);
    long long total = 1;
    for (size_t k = n; k-- > 0;) {
        strides_[k] = static_cast<int>(total);
        total *= layout_.subsystems[k].dim;
        if (total > (1LL << 30)) {
            throw std::invalid_argument("composite dimension too large");
        }
    }
    dim_ = static_cast<int>(total);
}

int HilbertSpace::subsystem_index(const std::string& label) const {
    for (size_t k = 0; k < layout_.subsystems.size(); ++k) {
        if (layout_.subsystems[k].label == label) return static_cast<int>(k);
    }
    throw std::out_of_range("unknown subsystem label '" + label + "'");
}

int HilbertSpace::flat_index(std::span<const int> multi) const {
    if (multi.size() != layout_.subsystems.size()) {
        throw std::invalid_argument("multi-index rank does not match layout");
    }
    int flat = 0;
    for (size_t k = 0; k < multi.size(); ++k) {
        if (multi[k] < 0 || multi[k] >= layout_.subsystems[k].dim) {
            throw std::out_of_range("multi-index out of range for subsystem '" +
                                    layout_.subsystems[k].label + "'");
        }
        flat += multi[k] * strides_[k];
    }
    return flat;
}

std::vector<int> HilbertSpace::multi_index(int flat) const {
    if (flat < 0 || flat >= dim_) throw std::out_of_range("flat index out of range");
    std::vector<int> multi(layout_.subsystems.size());
    for (size_t k = 0; k < multi.size(); ++k) {
        multi[k] = (flat / strides_[k]) % layout_.subsystems[k].dim;
    }
    return multi;
}

SpacePtr build_space(const SpaceLayout& layout) {
    return std::make_shared<const HilbertSpace>(layout);
}

SpaceLayout protocol_layout(int n_ph) {
    if (n_ph < 2) throw std::invalid_argument("n_ph must be at least 2");
    return SpaceLayout{{
        {"A1", 5}, {"A2", 5}, {"B1", 3}, {"B2", 3}, {"a1", n_ph}, {"a2", n_ph},
    }};
}

SpaceLayout single_subsystem(const std::string& label, int dim) {
    return SpaceLayout{{{label, dim}}};
}

}  // namespace bsa
