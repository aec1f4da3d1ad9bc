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

#include <Eigen/Eigenvalues>
#include <random>

#include "bsa/states.hpp"

using namespace bsa;

namespace {

DensityState random_density(const SpacePtr& space, std::mt19937& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    const int n = space->dim();
    Mat g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = cplx(dist(rng), dist(rng));
    }
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityState(space, std::move(rho));
}

}  // namespace

TEST_CASE("expectation of the identity is one") {
    auto space = build_space(SpaceLayout{{{"q", 3}, {"r", 4}}});
    std::mt19937 rng(5);
    const DensityState rho = random_density(space, rng);
    CHECK(expectation(identity_op(space), rho).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(expectation(identity_op(space), rho).imag()) <= 1e-12);
}

TEST_CASE("projector expectations on matching and orthogonal pure states") {
    auto space = build_space(single_subsystem("q", 4));
    Vec v = Vec::Zero(4), w = Vec::Zero(4);
    v[1] = 1.0;
    w[2] = 1.0;
    const SparseOperator proj(space, {{1, 1, cplx(1, 0)}});
    CHECK(expectation(proj, pure_density(PureState(space, v))).real() == doctest::Approx(1.0));
    CHECK(expectation(proj, pure_density(PureState(space, w))).real() == doctest::Approx(0.0));
}

TEST_CASE("expectation is real for Hermitian operators") {
    auto space = build_space(SpaceLayout{{{"q", 4}, {"r", 3}}});
    std::mt19937 rng(17);
    const DensityState rho = random_density(space, rng);
    SparseOperator op = transition_op(space, "q", 0, 2) * cplx(0.3, 0.7);
    op = op + op.dagger();
    REQUIRE(op.is_hermitian());
    CHECK(std::abs(expectation(op, rho).imag()) <= 1e-10);
}

TEST_CASE("expectation cross-checks against an eigenbasis oracle on dim <= 16") {
    auto space = build_space(SpaceLayout{{{"q", 4}, {"r", 4}}});
    std::mt19937 rng(23);
    const DensityState rho = random_density(space, rng);
    SparseOperator op = transition_op(space, "q", 1, 3) * cplx(0.5, -0.25);
    op = op + op.dagger() + transition_op(space, "r", 2, 2) * cplx(2.0, 0.0);

    // oracle: expand rho in its eigenbasis and sum <v|op|v> weighted terms
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
    cplx oracle = 0.0;
    const Mat op_dense = op.to_dense();
    for (int k = 0; k < rho.dim(); ++k) {
        const Eigen::VectorXcd v = es.eigenvectors().col(k);
        oracle += es.eigenvalues()[k] * (v.adjoint() * op_dense * v)(0);
    }
    CHECK(std::abs(expectation(op, rho) - oracle) <= 1e-10);
}

TEST_CASE("partial trace removes vacuum modes from a product state") {
    auto space = build_space(SpaceLayout{{{"q", 3}, {"a1", 2}, {"a2", 2}}});
    std::mt19937 rng(29);
    const DensityState rho_q = random_density(build_space(single_subsystem("q", 3)), rng);
    // rho_q tensor |0><0| tensor |0><0|
    Mat full = Mat::Zero(12, 12);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) full(4 * i, 4 * j) = rho_q.matrix()(i, j);
    }
    const DensityState reduced = partial_trace(DensityState(space, full), {"q"});
    CHECK((reduced.matrix() - rho_q.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("partial trace of the maximally mixed state is maximally mixed") {
    auto space = build_space(protocol_layout());
    const Mat mixed = Mat::Identity(900, 900) / 900.0;
    const DensityState reduced = partial_trace(DensityState(space, mixed), {"A1"});
    CHECK(reduced.dim() == 5);
    CHECK((reduced.matrix() - Mat::Identity(5, 5) / 5.0).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("partial trace of a Bell pair leaves half identity on the qubit block") {
    // direct 9x9 oracle on B1 (x) B2 with three levels each
    auto space = build_space(SpaceLayout{{{"B1", 3}, {"B2", 3}}});
    Vec bell = Vec::Zero(9);
    bell[0 * 3 + 0] = std::sqrt(0.5);  // |00>
    bell[1 * 3 + 1] = std::sqrt(0.5);  // |11>
    Mat rho = bell * bell.adjoint();

    // oracle: loop the 9x9 matrix directly
    Mat oracle = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int t = 0; t < 3; ++t) oracle(i, j) += rho(3 * i + t, 3 * j + t);
        }
    }
    const DensityState reduced = partial_trace(DensityState(space, rho), {"B1"});
    CHECK((reduced.matrix() - oracle).cwiseAbs().maxCoeff() <= 1e-15);
    // half identity on the {|0>,|1>} block, nothing on level 2
    CHECK(reduced.matrix()(0, 0).real() == doctest::Approx(0.5));
    CHECK(reduced.matrix()(1, 1).real() == doctest::Approx(0.5));
    CHECK(std::abs(reduced.matrix()(2, 2)) <= 1e-15);
    CHECK(std::abs(reduced.matrix()(0, 1)) <= 1e-15);
}

TEST_CASE("partial trace preserves trace and Hermiticity") {
    auto space = build_space(SpaceLayout{{{"q", 3}, {"r", 2}, {"s", 4}}});
    std::mt19937 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const DensityState rho = random_density(space, rng);
        for (const auto& keep : std::vector<std::set<std::string>>{
                 {"q"}, {"r"}, {"s"}, {"q", "s"}, {"q", "r", "s"}}) {
            const DensityState reduced = partial_trace(rho, keep);
            CHECK(std::abs(reduced.trace_real() - 1.0) <= 1e-12);
            CHECK(reduced.hermiticity_residual() <= 1e-14);
        }
    }
}

TEST_CASE("partial trace rejects unknown labels and empty keep sets") {
    auto space = build_space(SpaceLayout{{{"q", 3}, {"r", 2}}});
    std::mt19937 rng(37);
    const DensityState rho = random_density(space, rng);
    CHECK_THROWS_AS(partial_trace(rho, {"nope"}), std::out_of_range);
    CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
}

TEST_CASE("density state validation catches broken invariants") {
    auto space = build_space(single_subsystem("q", 2));
    Mat bad(2, 2);
    bad << cplx(0.5, 0.0), cplx(0.2, 0.1), cplx(0.9, 0.4), cplx(0.5, 0.0);
    CHECK_THROWS_AS(DensityState(space, bad).validate(), std::runtime_error);

    Mat neg(2, 2);
    neg << cplx(1.2, 0.0), cplx(0, 0), cplx(0, 0), cplx(-0.2, 0.0);
    CHECK_THROWS_AS(DensityState(space, neg).validate(), std::runtime_error);

    Mat good = Mat::Identity(2, 2) * 0.5;
    CHECK_NOTHROW(DensityState(space, good).validate());
}

TEST_CASE("pure states normalize and keep unit norm") {
    auto space = build_space(single_subsystem("q", 3));
    Vec v(3);
    v << cplx(3, 0), cplx(0, 4), cplx(0, 0);
    PureState psi(space, v);
    psi.normalize();
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-10);
}
