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

#include <doctest.h>

#include <nlohmann/json.hpp>

#include "bsa/protocol.hpp"

using namespace bsa;

namespace {

PureState readout_ket(const SpacePtr& space, BellState s) {
    const int patterns[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const auto bell = bell_amplitudes(s);
    Vec v = Vec::Zero(space->dim());
    std::vector<int> levels(static_cast<size_t>(space->subsystem_count()), 0);
    levels[0] = patterns[int(s)][0];
    levels[1] = patterns[int(s)][1];
    for (int b1 = 0; b1 < 2; ++b1) {
        for (int b2 = 0; b2 < 2; ++b2) {
            levels[2] = b1;
            levels[3] = b2;
            v[space->flat_index(levels)] = bell[static_cast<size_t>(2 * b1 + b2)];
        }
    }
    return PureState(space, v);
}

}  // namespace

TEST_CASE("bell state labels round-trip") {
    for (int s = 0; s < 4; ++s) {
        CHECK(parse_bell(bell_label(BellState(s))) == BellState(s));
    }
    CHECK_THROWS_AS(parse_bell("psi"), std::invalid_argument);
}

TEST_CASE("bell amplitudes are normalized with 1/sqrt(2)") {
    for (int s = 0; s < 4; ++s) {
        const auto amps = bell_amplitudes(BellState(s));
        double norm2 = 0.0;
        for (const auto& a : amps) norm2 += std::norm(a);
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(bell_amplitudes(BellState::PsiPlus)[0].real() ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("success probabilities on the readout kets follow the ancilla table") {
    auto space = build_space(protocol_layout());
    for (int s = 0; s < 4; ++s) {
        const DensityState rho = pure_density(readout_ket(space, BellState(s)));
        const auto probs = success_probabilities(rho);
        for (int x = 0; x < 4; ++x) {
            const double expected = (x == s) ? 1.0 : 0.0;
            CHECK(probs.identity_on_cavities[static_cast<size_t>(x)] ==
                  doctest::Approx(expected).epsilon(1e-12));
            CHECK(probs.vacuum_conditioned[static_cast<size_t>(x)] ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("maximally mixed computational block gives 1/16 everywhere") {
    auto space = build_space(protocol_layout());
    Mat rho = Mat::Zero(900, 900);
    std::vector<int> levels(6, 0);
    for (int a1 = 0; a1 < 2; ++a1) {
        for (int a2 = 0; a2 < 2; ++a2) {
            for (int b1 = 0; b1 < 2; ++b1) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    levels[0] = a1;
                    levels[1] = a2;
                    levels[2] = b1;
                    levels[3] = b2;
                    const int idx = space->flat_index(levels);
                    rho(idx, idx) = 1.0 / 16.0;
                }
            }
        }
    }
    const auto probs = success_probabilities(DensityState(space, rho));
    for (int x = 0; x < 4; ++x) {
        CHECK(probs.identity_on_cavities[static_cast<size_t>(x)] ==
              doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    }
}

TEST_CASE("initial conditions validate and build normalized kets") {
    auto space = build_space(protocol_layout());
    CHECK_THROWS_AS(InitialCondition::from_amplitudes({cplx(1, 0), cplx(1, 0), 0, 0}),
                    std::invalid_argument);
    const auto custom = InitialCondition::from_amplitudes(
        {cplx(0.6, 0.0), cplx(0.0, 0.8), cplx(0, 0), cplx(0, 0)});
    const PureState psi = protocol_initial_state(space, custom);
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);
    // population outside the computational levels is zero
    const int kA1 = space->subsystem_index("A1");
    for (int i = 0; i < space->dim(); ++i) {
        const auto multi = space->multi_index(i);
        const bool computational = multi[0] == 0 && multi[1] == 0 && multi[2] < 2 &&
                                   multi[3] < 2 && multi[4] == 0 && multi[5] == 0;
        if (!computational) CHECK(psi.amplitudes()[i] == cplx(0.0, 0.0));
    }
    (void)kA1;
}

TEST_CASE("with drives off the protocol state does not move") {
    // cavity couplings alone annihilate the computational subspace
    auto space = build_space(protocol_layout());
    const DeviceParams params = uniform_device(66.0);
    const HamiltonianModel model(space, params, assemble_schedule(params));
    TimeDependentHamiltonian h;
    h.space = space;
    h.constant = model.cavity_part();  // drives removed
    const PureState psi0 =
        protocol_initial_state(space, InitialCondition::from_bell(BellState::PhiMinus));
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const PureState out = evolve_schrodinger(h, psi0, 0.0, 6.0, cfg);
    CHECK(std::abs(out.overlap(psi0).real() - 1.0) <= 1e-12);
    const auto probs = success_probabilities(out);
    // ancillas still read |00>, so only the psi+ projector can respond
    CHECK(probs.identity_on_cavities[1] <= 1e-14);
    CHECK(probs.identity_on_cavities[2] <= 1e-14);
    CHECK(probs.identity_on_cavities[3] <= 1e-14);
}

TEST_CASE("integrator setup rejects an oversized step at strong coupling") {
    IntegratorConfig cfg;
    cfg.dt = 4e-3;  // sqrt(2)*66*dt = 0.37 rad
    CHECK_THROWS_AS(run_protocol(InitialCondition::from_bell(BellState::PsiPlus),
                                 uniform_device(66.0), DecoherenceSpec{}, cfg),
                    std::invalid_argument);
}

TEST_CASE("ideal runs distinguish every Bell state") {
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    for (int s = 0; s < 4; ++s) {
        const ProtocolResult r = run_protocol(InitialCondition::from_bell(BellState(s)),
                                              uniform_device(66.0), DecoherenceSpec{}, cfg);
        CHECK(r.pure_path);
        CHECK(r.probabilities[static_cast<size_t>(s)] >= 1.0 - 1.2e-5);
        for (int x = 0; x < 4; ++x) {
            if (x != s) CHECK(r.probabilities[static_cast<size_t>(x)] <= 2e-5);
        }
        CHECK(r.norm_drift <= 1e-8);
        CHECK(r.halvings >= 1);
        CHECK(r.cavity_leakage <= 1e-5);
        // identity-on-cavities and vacuum-conditioned agree when leakage is tiny
        CHECK(std::abs(r.probabilities[static_cast<size_t>(s)] -
                       r.vacuum_conditioned[static_cast<size_t>(s)]) <= r.cavity_leakage);
        // ancilla populations walk through the documented pattern: by 2T the
        // first ancilla has settled to its readout level
        REQUIRE(r.step_ancilla_populations.size() == 7);
        const auto& after2 = r.step_ancilla_populations[2];
        const int a1_level = (s == 2 || s == 3) ? 1 : 0;  // phi states flag A1=1
        CHECK(after2[static_cast<size_t>(1 + a1_level)] >= 0.999);
    }
}

TEST_CASE("nondestructiveness: the carrier pair survives the readout") {
    auto space = build_space(protocol_layout());
    const DeviceParams params = uniform_device(66.0);
    const TimeDependentHamiltonian h = protocol_hamiltonian(space, params);
    IntegratorConfig cfg;
    cfg.dt = 5e-4;
    for (int s = 0; s < 4; ++s) {
        const PureState psi0 =
            protocol_initial_state(space, InitialCondition::from_bell(BellState(s)));
        const PureState out = evolve_schrodinger(h, psi0, 0.0, 6.0, cfg);
        const DensityState reduced = partial_trace(pure_density(out), {"B1", "B2"});
        // compare against the bare两-qubit Bell state on the B1B2 space
        Vec bell = Vec::Zero(9);
        const auto amps = bell_amplitudes(BellState(s));
        bell[0 * 3 + 0] = amps[0];
        bell[0 * 3 + 1] = amps[1];
        bell[1 * 3 + 0] = amps[2];
        bell[1 * 3 + 1] = amps[3];
        const double fid = fidelity(reduced, PureState(reduced.space(), bell));
        CHECK(fid >= 0.9999);
    }
}

TEST_CASE("deeper photon truncation changes nothing") {
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const ProtocolResult two = run_protocol(InitialCondition::from_bell(BellState::PhiPlus),
                                            uniform_device(66.0), DecoherenceSpec{}, cfg, 2);
    const ProtocolResult three = run_protocol(InitialCondition::from_bell(BellState::PhiPlus),
                                              uniform_device(66.0), DecoherenceSpec{}, cfg, 3);
    for (int x = 0; x < 4; ++x) {
        CHECK(std::abs(two.probabilities[static_cast<size_t>(x)] -
                       three.probabilities[static_cast<size_t>(x)]) <= 1e-8);
    }

    // two-photon occupancy stays numerically empty along the way
    auto space = build_space(protocol_layout(3));
    const TimeDependentHamiltonian h = protocol_hamiltonian(space, uniform_device(66.0));
    const PureState psi0 =
        protocol_initial_state(space, InitialCondition::from_bell(BellState::PhiPlus));
    double max_two_photon = 0.0;
    const std::vector<double> samples = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    auto on_sample = [&](double, const PureState& state) {
        const int k1 = space->subsystem_index("a1");
        const int k2 = space->subsystem_index("a2");
        double pop = 0.0;
        for (int i = 0; i < space->dim(); ++i) {
            const int n1 = (i / space->stride(k1)) % 3;
            const int n2 = (i / space->stride(k2)) % 3;
            if (n1 + n2 >= 2) pop += std::norm(state.amplitudes()[i]);
        }
        max_two_photon = std::max(max_two_photon, pop);
    };
    evolve_schrodinger(h, psi0, 0.0, 6.0, cfg, nullptr, samples, on_sample);
    CHECK(max_two_photon < 1e-8);
}

TEST_CASE("truth tables pass at the operating point") {
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const CheckReport report = verify_truth_tables(uniform_device(66.0), cfg);
    for (const auto& row : report.rows) {
        INFO(row.name, " = ", row.value, " (threshold ", row.threshold, ")");
        CHECK(row.pass);
    }
    CHECK(report.all_pass());
    CHECK(report.rows.size() == 16);  // 8 table rows + 4 fidelities + 4 phases
}

TEST_CASE("single-qubit rotations match the quarter-turn forms") {
    const CheckReport report = single_qubit_check();
    for (const auto& row : report.rows) {
        INFO(row.name, " = ", row.value);
        CHECK(row.pass);
    }
    CHECK(report.rows.size() == 6);
}

TEST_CASE("json record carries inputs, rates and probabilities") {
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const auto init = InitialCondition::from_bell(BellState::PsiMinus);
    const DeviceParams params = uniform_device(66.0);
    DecoherenceSpec rates;
    const ProtocolResult r = run_protocol(init, params, rates, cfg);
    const std::string text = result_to_json(init, params, rates, r);
    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("input").get<std::string>() == "psi-");
    CHECK(j.at("params").at("g23A1").get<double>() == doctest::Approx(66.0));
    CHECK(j.at("probabilities").at("psi-").get<double>() >= 1.0 - 1.2e-5);
    CHECK(j.at("halvings").get<int>() >= 1);
    CHECK(j.at("diagnostics").contains("cavity_leakage"));
    CHECK(j.at("diagnostics").at("step_ancilla_populations").size() == 7);
}
