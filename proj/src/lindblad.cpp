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

#include "bsa/lindblad.hpp"

#include <cmath>
#include <stdexcept>

namespace bsa {

namespace {

struct ChannelDef {
    std::string name;
    enum class Kind { Emission, CavityDecay, Dephasing } kind;
    std::string subsystem;
    int a = 0;  // emission: target level; dephasing: upper level
    int b = 0;  // emission: source level; dephasing: lower level
};

std::vector<ChannelDef> build_channel_table() {
    std::vector<ChannelDef> defs;
    auto emission = [&](const std::string& sub, int to, int from) {
        defs.push_back({"gamma" + std::to_string(from) + std::to_string(to) + sub,
                        ChannelDef::Kind::Emission, sub, to, from});
    };
    for (const std::string& a : {std::string("A1"), std::string("A2")}) {
        emission(a, 0, 3);
        emission(a, 1, 3);
        emission(a, 2, 3);
        emission(a, 0, 4);
        emission(a, 1, 4);
        emission(a, 2, 4);
    }
    for (const std::string& b : {std::string("B1"), std::string("B2")}) {
        emission(b, 0, 2);
        emission(b, 1, 2);
    }
    defs.push_back({"kappa1", ChannelDef::Kind::CavityDecay, "a1"});
    defs.push_back({"kappa2", ChannelDef::Kind::CavityDecay, "a2"});
    auto dephasing = [&](const std::string& sub, int upper, int lower) {
        defs.push_back({"gammaphi" + std::to_string(upper) + std::to_string(lower) + sub,
                        ChannelDef::Kind::Dephasing, sub, upper, lower});
    };
    for (const std::string& a : {std::string("A1"), std::string("A2")}) {
        dephasing(a, 3, 0);
        dephasing(a, 3, 1);
        dephasing(a, 3, 2);
        dephasing(a, 4, 0);
        dephasing(a, 4, 1);
        dephasing(a, 4, 2);
    }
    for (const std::string& b : {std::string("B1"), std::string("B2")}) {
        dephasing(b, 2, 0);
        dephasing(b, 2, 1);
    }
    return defs;
}

const std::vector<ChannelDef>& channel_table() {
    static const std::vector<ChannelDef> defs = build_channel_table();
    return defs;
}

}  // namespace

const std::vector<std::string>& lindblad_channel_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& d : channel_table()) out.push_back(d.name);
        return out;
    }();
    return names;
}

void DecoherenceSpec::validate() const {
    if (gamma < 0 || gamma_phi < 0 || kappa < 0) {
        throw std::invalid_argument("decoherence rates must be nonnegative");
    }
    const auto& names = lindblad_channel_names();
    for (const auto& [key, value] : overrides) {
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            throw std::invalid_argument("unknown decoherence channel '" + key + "'");
        }
        if (value < 0) {
            throw std::invalid_argument("override rate for '" + key + "' must be nonnegative");
        }
    }
}

double DecoherenceSpec::channel_rate(const std::string& name) const {
    if (auto it = overrides.find(name); it != overrides.end()) return it->second;
    if (name.rfind("gammaphi", 0) == 0) return gamma_phi;
    if (name.rfind("gamma", 0) == 0) return gamma;
    if (name.rfind("kappa", 0) == 0) return kappa;
    throw std::invalid_argument("unknown decoherence channel '" + name + "'");
}

bool DecoherenceSpec::all_zero() const {
    if (gamma != 0.0 || gamma_phi != 0.0 || kappa != 0.0) return false;
    for (const auto& [key, value] : overrides) {
        (void)key;
        if (value != 0.0) return false;
    }
    return true;
}

std::vector<SparseOperator> lindblad_operators(const DecoherenceSpec& spec,
                                               const SpacePtr& space) {
    spec.validate();
    std::vector<SparseOperator> ops;
    ops.reserve(kLindbladChannelCount);
    for (const auto& def : channel_table()) {
        const double rate = spec.channel_rate(def.name);
        const double amp = std::sqrt(rate);
        switch (def.kind) {
            case ChannelDef::Kind::Emission:
                ops.push_back(transition_op(space, def.subsystem, def.a, def.b) * cplx(amp, 0.0));
                break;
            case ChannelDef::Kind::CavityDecay:
                ops.push_back(annihilation_op(space, def.subsystem) * cplx(amp, 0.0));
                break;
            case ChannelDef::Kind::Dephasing: {
                const int d = space->subsystem_dim(space->subsystem_index(def.subsystem));
                std::vector<double> diag(static_cast<size_t>(d), 0.0);
                diag[static_cast<size_t>(def.a)] = amp;
                diag[static_cast<size_t>(def.b)] = -amp;
                ops.push_back(diagonal_op(space, def.subsystem, diag));
                break;
            }
        }
    }
    return ops;
}

}  // namespace bsa
