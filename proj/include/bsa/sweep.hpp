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

#ifndef BSA_SWEEP_HPP
#define BSA_SWEEP_HPP

#include "bsa/protocol.hpp"

namespace bsa {

/// Sweep axes. The g axis sets all six couplings uniformly (1/T units);
/// the ratio axes scale the named rate as a fraction of the peak drive
/// amplitude pi^2/(2T).
enum class SweepAxis { G, KappaOverOmega, GammaOverOmega, GammaPhiOverOmega };
std::string axis_label(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);  // g, kappa, gamma, gammaphi

struct SweepSpec {
    SweepAxis axis = SweepAxis::G;
    double lo = 0.0;
    double hi = 1.0;
    int points = 2;
    DeviceParams base_params;
    DecoherenceSpec base_rates;
    IntegratorConfig integrator;
    std::vector<BellState> inputs = {BellState::PsiPlus, BellState::PsiMinus,
                                     BellState::PhiPlus, BellState::PhiMinus};
    int n_ph = 2;

    void validate() const;  // lo < hi, points >= 2, nonempty inputs
};

/// One sweep point. `probabilities[k]` is the matching success probability
/// for Bell input k; inputs that were not requested stay NaN. A failure at
/// this point is recorded in `error` and leaves its probabilities NaN.
struct SweepRow {
    double axis_value = 0.0;
    std::array<double, 4> probabilities{std::nan(""), std::nan(""), std::nan(""), std::nan("")};
    int halvings = 0;
    double trace_drift = 0.0;
    std::string error;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::G;
    std::vector<SweepRow> rows;
};

/// Runs every point. Points execute on `parallelism` threads over immutable
/// shared configuration; rows are merged by index, so the table does not
/// depend on scheduling. Per-point failures are recorded, not rethrown.
SweepResult sweep(const SweepSpec& spec, int parallelism = 1);

enum class EmitFormat { Csv, Json };
EmitFormat parse_format(const std::string& name);

/// CSV table with the fixed header
///   axis,p_psi_plus,p_psi_minus,p_phi_plus,p_phi_minus,halvings,trace_drift
/// and all numbers at 9 significant digits.
std::string to_csv(const SweepResult& result);
/// JSON array mirroring the rows as records.
std::string to_json(const SweepResult& result);

/// Writes the table; failures carry the path in the exception message.
void emit(const SweepResult& result, EmitFormat format, const std::string& path);

/// Parses a to_json() string back into rows (round-trip support).
SweepResult sweep_from_json(const std::string& text);

}  // namespace bsa

#endif  // BSA_SWEEP_HPP
