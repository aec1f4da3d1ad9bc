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

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bsa/config.hpp"
#include "bsa/sweep.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    bool experimental = false;
    double g = -1.0;
    double T = -1.0;
    double dt = -1.0;
    double gamma = -1.0;
    double gamma_phi = -1.0;
    double kappa = -1.0;
    int n_ph = -1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key-value config file");
        cmd->add_flag("--experimental", experimental,
                      "start from the published experimental operating point");
        cmd->add_option("--g", g, "uniform coupling constant (1/T)");
        cmd->add_option("--T", T, "step duration");
        cmd->add_option("--dt", dt, "integrator base step");
        cmd->add_option("--gamma", gamma, "uniform emission rate (1/T)");
        cmd->add_option("--gamma-phi", gamma_phi, "uniform dephasing rate (1/T)");
        cmd->add_option("--kappa", kappa, "uniform cavity decay rate (1/T)");
        cmd->add_option("--n-ph", n_ph, "photon-space dimension per mode");
    }

    bsa::SimConfig resolve() const {
        bsa::SimConfig cfg = experimental ? bsa::experimental_config() : bsa::default_config();
        if (!config_path.empty()) {
            bsa::SimConfig from_file = bsa::load_config(config_path);
            if (experimental) {
                // file refines the named scenario
                cfg = bsa::experimental_config();
                std::ifstream probe(config_path);
                std::string line;
                bsa::SimConfig merged = cfg;
                while (std::getline(probe, line)) {
                    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
                    std::replace(line.begin(), line.end(), '=', ' ');
                    std::istringstream row(line);
                    std::string key, value;
                    if (row >> key >> value) merged.set(key, value);
                }
                merged.finalize();
                cfg = merged;
            } else {
                cfg = from_file;
            }
        }
        if (g > 0) {
            cfg.params.g23A1 = cfg.params.g24A1 = cfg.params.g23A2 = cfg.params.g24A2 = g;
            cfg.params.gB1 = cfg.params.gB2 = g;
        }
        if (T > 0) cfg.params.T = T;
        if (dt > 0) {
            cfg.integrator.dt = dt;
            cfg.dt_explicit = true;
        }
        if (gamma >= 0) cfg.rates.gamma = gamma;
        if (gamma_phi >= 0) cfg.rates.gamma_phi = gamma_phi;
        if (kappa >= 0) cfg.rates.kappa = kappa;
        if (n_ph >= 2) cfg.n_ph = n_ph;
        cfg.finalize();
        return cfg;
    }
};

std::vector<bsa::BellState> parse_states(const std::string& csv) {
    std::vector<bsa::BellState> out;
    std::istringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) out.push_back(bsa::parse_bell(item));
    }
    if (out.empty()) throw std::invalid_argument("no Bell states given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nondestructive Bell-state analysis simulator for SQUID qubits"};
    app.require_subcommand(1);

    // pulses
    auto* pulses = app.add_subcommand("pulses", "write the drive schedule as CSV");
    CommonOptions pulses_opts;
    pulses_opts.attach(pulses);
    std::string pulses_out = "pulses.csv";
    int pulses_samples = 1201;
    pulses->add_option("--out", pulses_out, "output CSV path");
    pulses->add_option("--samples", pulses_samples, "sample count over [0, 6T]");

    // run
    auto* run = app.add_subcommand("run", "run the six-step analysis for one input");
    CommonOptions run_opts;
    run_opts.attach(run);
    std::string run_state = "psi+";
    std::string run_out;
    run->add_option("--state", run_state, "psi+, psi-, phi+ or phi-")->required();
    run->add_option("--out", run_out, "also write the JSON record here");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one axis and tabulate");
    CommonOptions sweep_opts;
    sweep_opts.attach(sweep_cmd);
    std::string sweep_axis = "g", sweep_out, sweep_format = "csv", sweep_states;
    double sweep_from = 5.0, sweep_to = 100.0;
    int sweep_points = 40, sweep_threads = 0;
    sweep_cmd->add_option("--axis", sweep_axis, "g, kappa, gamma or gammaphi")->required();
    sweep_cmd->add_option("--from", sweep_from, "axis start")->required();
    sweep_cmd->add_option("--to", sweep_to, "axis end")->required();
    sweep_cmd->add_option("--points", sweep_points, "number of points")->required();
    sweep_cmd->add_option("--out", sweep_out, "output path (default sweep.<format>)");
    sweep_cmd->add_option("--format", sweep_format, "csv or json");
    sweep_cmd->add_option("--threads", sweep_threads, "parallel points (default BSA_THREADS)");
    sweep_cmd->add_option("--states", sweep_states, "comma list of Bell inputs (default all)");

    // verify
    auto* verify = app.add_subcommand("verify", "truth tables and invariant checks");
    CommonOptions verify_opts;
    verify_opts.attach(verify);

    // effective-compare
    auto* effcmp = app.add_subcommand("effective-compare",
                                      "nine-state step model vs the chain reduction");
    CommonOptions eff_opts;
    eff_opts.attach(effcmp);
    std::string eff_gs = "66,40,30,20,15,10,7,5";
    std::string eff_out;
    effcmp->add_option("--gs", eff_gs, "comma list of couplings (1/T)");
    effcmp->add_option("--out", eff_out, "optional CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*pulses) {
            const bsa::SimConfig cfg = pulses_opts.resolve();
            const auto schedule = bsa::assemble_schedule(cfg.params);
            const std::string path = !pulses_out.empty() ? pulses_out
                                     : !cfg.output.empty() ? cfg.output
                                                           : "pulses.csv";
            schedule.write_csv(path, pulses_samples);
            std::printf("wrote %s (peak amplitude %.6g/T)\n", path.c_str(),
                        schedule.peak_amplitude() * cfg.params.T);
        } else if (*run) {
            const bsa::SimConfig cfg = run_opts.resolve();
            const auto init = bsa::InitialCondition::from_bell(bsa::parse_bell(run_state));
            const bsa::ProtocolResult result =
                bsa::run_protocol(init, cfg.params, cfg.rates, cfg.integrator, cfg.n_ph);
            const std::string record =
                bsa::result_to_json(init, cfg.params, cfg.rates, result);
            std::cout << record << '\n';
            const std::string path = !run_out.empty() ? run_out : cfg.output;
            if (!path.empty()) {
                std::ofstream out(path);
                if (!out) throw std::runtime_error("cannot open '" + path + "'");
                out << record << '\n';
            }
        } else if (*sweep_cmd) {
            const bsa::SimConfig cfg = sweep_opts.resolve();
            bsa::SweepSpec spec;
            spec.axis = bsa::parse_axis(sweep_axis);
            spec.lo = sweep_from;
            spec.hi = sweep_to;
            spec.points = sweep_points;
            spec.base_params = cfg.params;
            spec.base_rates = cfg.rates;
            spec.integrator = cfg.integrator;
            spec.n_ph = cfg.n_ph;
            if (!sweep_states.empty()) spec.inputs = parse_states(sweep_states);
            const int threads = bsa::thread_count_from_env(sweep_threads);
            const bsa::SweepResult result = bsa::sweep(spec, threads);
            const bsa::EmitFormat format = bsa::parse_format(sweep_format);
            std::string path = !sweep_out.empty() ? sweep_out : cfg.output;
            if (path.empty()) path = "sweep." + sweep_format;
            bsa::emit(result, format, path);
            std::printf("wrote %s (%d points, %d threads)\n", path.c_str(), sweep_points,
                        threads);
        } else if (*verify) {
            const bsa::SimConfig cfg = verify_opts.resolve();
            bsa::CheckReport report = bsa::verify_truth_tables(cfg.params, cfg.integrator);
            bsa::CheckReport rotations = bsa::single_qubit_check();
            report.rows.insert(report.rows.end(), rotations.rows.begin(), rotations.rows.end());
            std::cout << report.to_text();
            if (!report.all_pass()) {
                std::cout << "verification FAILED\n";
                return 1;
            }
            std::cout << "all checks passed\n";
        } else if (*effcmp) {
            const bsa::SimConfig cfg = eff_opts.resolve();
            std::vector<double> gs;
            std::istringstream stream(eff_gs);
            std::string item;
            while (std::getline(stream, item, ',')) {
                if (!item.empty()) gs.push_back(std::stod(item));
            }
            std::string csv = "g,full_pop_start,full_pop_end,eff_pop_start,eff_pop_end,max_deviation\n";
            std::printf("%10s %14s %14s %14s %14s %12s\n", "g", "full start", "full end",
                        "eff start", "eff end", "deviation");
            for (double g : gs) {
                bsa::DeviceParams params = bsa::uniform_device(g, cfg.params.T);
                const auto cmp = bsa::compare_effective(params);
                std::printf("%10.4g %14.10f %14.10f %14.10f %14.10f %12.3e\n", cmp.g,
                            cmp.full_pop_start, cmp.full_pop_end, cmp.eff_pop_start,
                            cmp.eff_pop_end, cmp.max_deviation);
                char buf[200];
                std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", cmp.g,
                              cmp.full_pop_start, cmp.full_pop_end, cmp.eff_pop_start,
                              cmp.eff_pop_end, cmp.max_deviation);
                csv += buf;
            }
            if (!eff_out.empty()) {
                std::ofstream out(eff_out);
                if (!out) throw std::runtime_error("cannot open '" + eff_out + "'");
                out << csv;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
