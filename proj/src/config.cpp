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

#include "bsa/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace bsa {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + value +
                                    "' as a number");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const int i = static_cast<int>(v);
    if (double(i) != v) {
        throw std::invalid_argument("config key '" + key + "': expected an integer");
    }
    return i;
}

}  // namespace

void SimConfig::set(const std::string& key, const std::string& value) {
    if (key == "T") {
        params.T = parse_double(key, value);
    } else if (key == "g") {
        const double g = parse_double(key, value);
        params.g23A1 = params.g24A1 = params.g23A2 = params.g24A2 = g;
        params.gB1 = params.gB2 = g;
    } else if (key == "g23A1") {
        params.g23A1 = parse_double(key, value);
    } else if (key == "g24A1") {
        params.g24A1 = parse_double(key, value);
    } else if (key == "g23A2") {
        params.g23A2 = parse_double(key, value);
    } else if (key == "g24A2") {
        params.g24A2 = parse_double(key, value);
    } else if (key == "gB1") {
        params.gB1 = parse_double(key, value);
    } else if (key == "gB2") {
        params.gB2 = parse_double(key, value);
    } else if (key == "epsilon1") {
        params.epsilon1 = parse_double(key, value);
    } else if (key == "epsilon2") {
        params.epsilon2 = parse_double(key, value);
    } else if (key == "n_ph") {
        n_ph = parse_int(key, value);
    } else if (key == "dt") {
        integrator.dt = parse_double(key, value);
        dt_explicit = true;
    } else if (key == "convergence_target") {
        integrator.convergence_target = parse_double(key, value);
    } else if (key == "max_halvings") {
        integrator.max_halvings = parse_int(key, value);
    } else if (key == "check_positivity") {
        integrator.check_positivity = parse_int(key, value) != 0;
    } else if (key == "trajectory_dump") {
        integrator.trajectory_dump = value;
    } else if (key == "gamma") {
        rates.gamma = parse_double(key, value);
    } else if (key == "gamma_phi") {
        rates.gamma_phi = parse_double(key, value);
    } else if (key == "kappa") {
        rates.kappa = parse_double(key, value);
    } else if (key == "output") {
        output = value;
    } else {
        // remaining valid keys are the 34 per-channel override names
        const auto& names = lindblad_channel_names();
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
        rates.overrides[key] = parse_double(key, value);
    }
}

void SimConfig::finalize() {
    if (!dt_explicit) integrator.dt = 1e-3 * params.T;
    params.validate();
    rates.validate();
    if (n_ph < 2) throw std::invalid_argument("n_ph must be at least 2");
}

SimConfig default_config() {
    SimConfig cfg;
    cfg.finalize();
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), '=', ' ');
        std::istringstream row(line);
        std::string key, value, extra;
        if (!(row >> key)) continue;  // blank line
        if (!(row >> value)) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": key '" + key + "' has no value");
        }
        if (row >> extra) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": unexpected trailing token '" + extra + "'");
        }
        cfg.set(key, value);
    }
    cfg.finalize();
    return cfg;
}

SimConfig experimental_config() {
    SimConfig cfg;
    // Peak drive Omega_max = 2*pi*6.37 MHz fixes the time unit through
    // Omega_max = pi^2/(2T); all magnitudes below are expressed in 1/T.
    const double pi = std::numbers::pi;
    const double omega_max_mhz = 2.0 * pi * 6.37;
    const double g_mhz = 2.0 * pi * 85.14;
    const double omega_max = pi * pi / 2.0;          // in 1/T
    const double g = g_mhz / omega_max_mhz * omega_max;
    cfg.params.g23A1 = cfg.params.g24A1 = cfg.params.g23A2 = cfg.params.g24A2 = g;
    cfg.params.gB1 = cfg.params.gB2 = g;
    const double t_us = omega_max / omega_max_mhz;   // T in microseconds
    cfg.rates.kappa = 1.32 * t_us;
    cfg.rates.gamma = 0.40 * t_us;
    cfg.rates.gamma_phi = 0.20 * t_us;
    cfg.finalize();
    return cfg;
}

int thread_count_from_env(int fallback) {
    if (const char* env = std::getenv("BSA_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    if (fallback > 0) return fallback;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace bsa
