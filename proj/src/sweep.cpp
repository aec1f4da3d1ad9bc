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

#include "bsa/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

namespace bsa {

std::string axis_label(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::G: return "g";
        case SweepAxis::KappaOverOmega: return "kappa";
        case SweepAxis::GammaOverOmega: return "gamma";
        case SweepAxis::GammaPhiOverOmega: return "gammaphi";
    }
    throw std::invalid_argument("unknown sweep axis");
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "g") return SweepAxis::G;
    if (name == "kappa") return SweepAxis::KappaOverOmega;
    if (name == "gamma") return SweepAxis::GammaOverOmega;
    if (name == "gammaphi") return SweepAxis::GammaPhiOverOmega;
    throw std::invalid_argument("unknown sweep axis '" + name +
                                "' (expected g, kappa, gamma or gammaphi)");
}

void SweepSpec::validate() const {
    if (!(lo < hi)) throw std::invalid_argument("sweep range needs lo < hi");
    if (points < 2) throw std::invalid_argument("sweep needs at least 2 points");
    if (inputs.empty()) throw std::invalid_argument("sweep needs at least one Bell input");
    base_params.validate();
    base_rates.validate();
}

namespace {

SweepRow run_point(const SweepSpec& spec, double value) {
    DeviceParams params = spec.base_params;
    DecoherenceSpec rates = spec.base_rates;
    const double omega_max = std::numbers::pi * std::numbers::pi / (2.0 * params.T);
    switch (spec.axis) {
        case SweepAxis::G:
            params.g23A1 = params.g24A1 = params.g23A2 = params.g24A2 = value;
            params.gB1 = params.gB2 = value;
            break;
        case SweepAxis::KappaOverOmega:
            rates.kappa = value * omega_max;
            break;
        case SweepAxis::GammaOverOmega:
            rates.gamma = value * omega_max;
            break;
        case SweepAxis::GammaPhiOverOmega:
            rates.gamma_phi = value * omega_max;
            break;
    }

    SweepRow row;
    row.axis_value = value;
    try {
        for (BellState input : spec.inputs) {
            const ProtocolResult r = run_protocol(InitialCondition::from_bell(input), params,
                                                  rates, spec.integrator, spec.n_ph);
            row.probabilities[static_cast<size_t>(input)] =
                r.probabilities[static_cast<size_t>(input)];
            row.halvings = std::max(row.halvings, r.halvings);
            row.trace_drift = std::max(row.trace_drift, r.trace_drift);
        }
    } catch (const std::exception& e) {
        row.error = e.what();
        row.probabilities = {std::nan(""), std::nan(""), std::nan(""), std::nan("")};
    }
    return row;
}

std::string fmt9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

SweepResult sweep(const SweepSpec& spec, int parallelism) {
    spec.validate();
    if (parallelism < 1) throw std::invalid_argument("parallelism must be positive");

    std::vector<double> values(static_cast<size_t>(spec.points));
    for (int i = 0; i < spec.points; ++i) {
        values[static_cast<size_t>(i)] =
            spec.lo + (spec.hi - spec.lo) * i / double(spec.points - 1);
    }

    SweepResult result;
    result.axis = spec.axis;
    result.rows.resize(values.size());

    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = cursor.fetch_add(1);
            if (i >= values.size()) break;
            result.rows[i] = run_point(spec, values[i]);
        }
    };
    if (parallelism == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n = std::min<int>(parallelism, spec.points);
        pool.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return result;
}

EmitFormat parse_format(const std::string& name) {
    if (name == "csv") return EmitFormat::Csv;
    if (name == "json") return EmitFormat::Json;
    throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

std::string to_csv(const SweepResult& result) {
    std::string out = "axis,p_psi_plus,p_psi_minus,p_phi_plus,p_phi_minus,halvings,trace_drift\n";
    for (const auto& row : result.rows) {
        out += fmt9(row.axis_value);
        for (int k = 0; k < 4; ++k) {
            out += ',';
            out += fmt9(row.probabilities[static_cast<size_t>(k)]);
        }
        out += ',' + std::to_string(row.halvings);
        out += ',' + fmt9(row.trace_drift);
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : result.rows) {
        nlohmann::json r = {{"axis", row.axis_value},
                            {"p_psi_plus", row.probabilities[0]},
                            {"p_psi_minus", row.probabilities[1]},
                            {"p_phi_plus", row.probabilities[2]},
                            {"p_phi_minus", row.probabilities[3]},
                            {"halvings", row.halvings},
                            {"trace_drift", row.trace_drift}};
        if (!row.error.empty()) r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    nlohmann::json j = {{"axis", axis_label(result.axis)}, {"rows", rows}};
    return j.dump(2);
}

void emit(const SweepResult& result, EmitFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << (format == EmitFormat::Csv ? to_csv(result) : to_json(result));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

SweepResult sweep_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SweepResult result;
    result.axis = parse_axis(j.at("axis").get<std::string>());
    auto num = [](const nlohmann::json& v) {
        return v.is_number() ? v.get<double>() : std::nan("");  // NaN serializes as null
    };
    for (const auto& r : j.at("rows")) {
        SweepRow row;
        row.axis_value = r.at("axis").get<double>();
        row.probabilities = {num(r.at("p_psi_plus")), num(r.at("p_psi_minus")),
                             num(r.at("p_phi_plus")), num(r.at("p_phi_minus"))};
        row.halvings = r.at("halvings").get<int>();
        row.trace_drift = r.at("trace_drift").get<double>();
        if (r.contains("error")) row.error = r.at("error").get<std::string>();
        result.rows.push_back(std::move(row));
    }
    return result;
}

}  // namespace bsa
