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

#ifndef BSA_CONFIG_HPP
#define BSA_CONFIG_HPP

#include <string>

#include "bsa/integrator.hpp"

namespace bsa {

/// One simulation setup: device, rates and integration settings.
/// Values load from a flat key-value text file ("key value" or
/// "key = value" lines, '#' comments). Flags from the command line are
/// applied after the file, so flags beat the file, and the file beats
/// the built-in defaults.
struct SimConfig {
    DeviceParams params;
    DecoherenceSpec rates;
    IntegratorConfig integrator;
    int n_ph = 2;
    std::string output;

    /// dt defaults to 1e-3 * T unless set explicitly.
    bool dt_explicit = false;
    void finalize();

    void set(const std::string& key, const std::string& value);
};

SimConfig default_config();
SimConfig load_config(const std::string& path);

/// Operating point with published experimental magnitudes: peak drive
/// 2*pi*6.37 MHz, coupling 2*pi*85.14 MHz, cavity decay 1.32 MHz,
/// emission 0.40 MHz, dephasing 0.20 MHz, converted to 1/T units.
SimConfig experimental_config();

/// Worker count: BSA_THREADS when set, otherwise `fallback`
/// (pass 0 for hardware concurrency).
int thread_count_from_env(int fallback = 0);

}  // namespace bsa

#endif  // BSA_CONFIG_HPP
