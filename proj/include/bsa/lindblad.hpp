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

#ifndef BSA_LINDBLAD_HPP
#define BSA_LINDBLAD_HPP

#include <map>
#include <string>
#include <vector>

#include "bsa/sparse_op.hpp"

namespace bsa {

/// Decoherence rates (in 1/T units). The three uniform rates cover all 34
/// channels; individual channels can be overridden by name.
///
/// Channel names, in operator order:
///   gamma30A1 gamma31A1 gamma32A1 gamma40A1 gamma41A1 gamma42A1   (1-6)
///   gamma30A2 gamma31A2 gamma32A2 gamma40A2 gamma41A2 gamma42A2   (7-12)
///   gamma20B1 gamma21B1 gamma20B2 gamma21B2                       (13-16)
///   kappa1 kappa2                                                 (17-18)
///   gammaphi30A1 ... gammaphi42A1                                 (19-24)
///   gammaphi30A2 ... gammaphi42A2                                 (25-30)
///   gammaphi20B1 gammaphi21B1 gammaphi20B2 gammaphi21B2           (31-34)
///
/// The ancilla qubits have no 4<->3 or 2<->0/1 channels.
struct DecoherenceSpec {
    double gamma = 0.0;      // spontaneous emission, all 16 emission channels
    double gamma_phi = 0.0;  // dephasing, all 16 dephasing channels
    double kappa = 0.0;      // cavity decay, both modes
    std::map<std::string, double> overrides;

    void validate() const;  // rates >= 0, override keys from the enumeration
    double channel_rate(const std::string& name) const;
    bool all_zero() const;
};

inline constexpr int kLindbladChannelCount = 34;

/// The 34 channel names in operator order.
const std::vector<std::string>& lindblad_channel_names();

/// Builds the 34 collapse operators on the composite space, in the fixed
/// order above. Channels with zero rate come out as zero operators.
std::vector<SparseOperator> lindblad_operators(const DecoherenceSpec& spec,
                                               const SpacePtr& space);

}  // namespace bsa

#endif  // BSA_LINDBLAD_HPP
