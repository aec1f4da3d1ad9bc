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

#include "bsa/sta.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace bsa {

namespace {
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void require_in_range(double t, double lo, double hi, const char* what) {
    const double slack = 1e-9 * (hi - lo);
    if (t < lo - slack || t > hi + slack) {
        throw std::out_of_range(std::string(what) + ": time outside its domain");
    }
}
}  // namespace

void PathParams::validate(int grid_points) const {
    if (T <= 0) throw std::invalid_argument("path duration must be positive");
    if (!theta || !theta_dot || !vartheta || !vartheta_dot || !varphi || !varphi_dot) {
        throw std::invalid_argument("path angles and derivatives must all be set");
    }
    const double tol = 1e-10;
    if (std::abs(varphi(0.0) + kPi / 2) > tol || std::abs(varphi(T) - kPi / 2) > tol) {
        throw std::invalid_argument("path violates the varphi boundary conditions");
    }
    if (std::abs(vartheta(0.0) + theta(0.0)) > tol ||
        std::abs(vartheta(T) - theta(T) - kPi / 2) > tol) {
        throw std::invalid_argument("path violates the theta/vartheta boundary conditions");
    }
    for (int i = 0; i < grid_points; ++i) {
        const double t = T * i / (grid_points - 1);
        if (std::abs(theta_dot(t) - vartheta_dot(t) * std::sin(varphi(t))) > tol) {
            throw std::invalid_argument("path violates theta' = vartheta' sin(varphi)");
        }
    }
}

PathParams cosine_path(double T) {
    PathParams p;
    p.T = T;
    p.theta = [](double) { return -kPi / 4; };
    p.theta_dot = [](double) { return 0.0; };
    p.vartheta = [](double) { return kPi / 4; };
    p.vartheta_dot = [](double) { return 0.0; };
    p.varphi = [T](double t) { return -(kPi / 2) * std::cos(kPi * t / T); };
    p.varphi_dot = [T](double t) { return (kPi * kPi / (2 * T)) * std::sin(kPi * t / T); };
    return p;
}

Eigen::Matrix3cd path_frame(const PathParams& path, double t) {
    require_in_range(t, 0.0, path.T, "path_frame");
    const double th = path.theta(t), vt = path.vartheta(t), ph = path.varphi(t);
    const double ct = std::cos(th), st = std::sin(th);
    const double cv = std::cos(vt), sv = std::sin(vt);
    const double cp = std::cos(ph), sp = std::sin(ph);
    const cplx i(0.0, 1.0);
    Eigen::Matrix3cd frame;
    frame.col(0) << ct * sp * cv + st * sv, i * cp * cv, st * sp * cv - ct * sv;
    frame.col(1) << ct * sp * sv - st * cv, i * cp * sv, st * sp * sv + ct * cv;
    frame.col(2) << ct * cp, -i * sp, st * cp;
    return frame;
}

ChainCoefficients counterdiabatic_coefficients(const PathParams& path, double t) {
    const double th = path.theta(t), ph = path.varphi(t);
    const double thd = path.theta_dot(t), vtd = path.vartheta_dot(t), phd = path.varphi_dot(t);
    ChainCoefficients c;
    c.omega12 = phd * std::cos(th) + vtd * std::sin(th) * std::cos(ph);
    c.omega23 = phd * std::sin(th) - vtd * std::cos(th) * std::cos(ph);
    c.omega31 = thd - vtd * std::sin(ph);
    return c;
}

Eigen::Matrix3cd chain_hamiltonian(const PathParams& path, double t) {
    const ChainCoefficients c = counterdiabatic_coefficients(path, t);
    const cplx i(0.0, 1.0);
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 1) = c.omega12;
    h(1, 0) = c.omega12;
    h(1, 2) = c.omega23;
    h(2, 1) = c.omega23;
    h(2, 0) = i * c.omega31;
    h(0, 2) = -i * c.omega31;
    return h;
}

Eigen::Matrix3cd analytic_propagator(const PathParams& path, double t) {
    const Eigen::Matrix3cd now = path_frame(path, t);
    const Eigen::Matrix3cd start = path_frame(path, 0.0);
    return now * start.adjoint();
}

PulseSchedule::PulseSchedule(DeviceParams params, PathParams path)
    : params_(std::move(params)), path_(std::move(path)) {
    params_.validate();
    path_.validate();
    if (std::abs(path_.T - params_.T) > 1e-12 * params_.T) {
        throw std::invalid_argument("path duration must equal the step duration T");
    }
    auto pre = [](double gA, double gB) { return std::sqrt(gA * gA + gB * gB) / gB; };
    prefactor_[int(DriveId::O03A1)] = pre(params_.g23A1, params_.gB1);
    prefactor_[int(DriveId::O13A1)] = pre(params_.g23A1, params_.gB1);
    prefactor_[int(DriveId::O04A1)] = pre(params_.g24A1, params_.gB2);
    prefactor_[int(DriveId::O14A1)] = pre(params_.g24A1, params_.gB2);
    prefactor_[int(DriveId::O03A2)] = pre(params_.g23A2, params_.gB1);
    prefactor_[int(DriveId::O13A2)] = pre(params_.g23A2, params_.gB1);
    prefactor_[int(DriveId::O04A2)] = pre(params_.g24A2, params_.gB2);
    prefactor_[int(DriveId::O14A2)] = pre(params_.g24A2, params_.gB2);
    prefactor_[int(DriveId::OB1)] = 1.0;
    prefactor_[int(DriveId::OB2)] = 1.0;
}

double PulseSchedule::amplitude(DriveId id, double t) const {
    const double T = params_.T;
    require_in_range(t, 0.0, 6.0 * T, "schedule");
    int step = static_cast<int>(std::floor(t / T));
    if (step > 5) step = 5;
    if (step < 0) step = 0;
    const double s = std::min(std::max(t - step * T, 0.0), T);
    // every envelope vanishes at the step edges; pin the boundary values to
    // exact zeros so rounding in sin(pi s / T) cannot leak across steps
    if (s <= 0.0 || s >= T) return 0.0;

    // Which step hosts each line. The B lines run on steps 3 and 6.
    switch (id) {
        case DriveId::O03A1:
        case DriveId::O13A1:
            if (step != 0) return 0.0;
            break;
        case DriveId::O04A1:
        case DriveId::O14A1:
            if (step != 1) return 0.0;
            break;
        case DriveId::OB1:
        case DriveId::OB2: {
            if (step != 2 && step != 5) return 0.0;
            const double sign = (step == 2) ? 1.0 : -1.0;
            return sign * (kPi * kPi / (8 * T)) * std::sin(kPi * s / T);
        }
        case DriveId::O03A2:
        case DriveId::O13A2:
            if (step != 3) return 0.0;
            break;
        case DriveId::O04A2:
        case DriveId::O14A2:
            if (step != 4) return 0.0;
            break;
    }

    const ChainCoefficients c = counterdiabatic_coefficients(path_, s);
    const bool first_of_pair = id == DriveId::O03A1 || id == DriveId::O04A1 ||
                               id == DriveId::O03A2 || id == DriveId::O04A2;
    return prefactor_[int(id)] * (first_of_pair ? c.omega12 : c.omega23);
}

double PulseSchedule::peak_amplitude() const {
    double peak = 0.0;
    const int samples = 6001;
    for (int i = 0; i < samples; ++i) {
        const double t = total_time() * i / (samples - 1);
        for (DriveId id : all_drives()) peak = std::max(peak, std::abs(amplitude(id, t)));
    }
    return peak;
}

double PulseSchedule::integrate(DriveId id, double t0, double t1, int panels) const {
    // composite Simpson rule
    if (panels % 2 != 0) ++panels;
    const double h = (t1 - t0) / panels;
    double sum = amplitude(id, t0) + amplitude(id, t1);
    for (int i = 1; i < panels; ++i) {
        sum += amplitude(id, t0 + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

void PulseSchedule::write_csv(const std::string& path, int samples) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "t,drive_label,amplitude\n";
    char buf[64];
    for (int i = 0; i < samples; ++i) {
        const double t = total_time() * i / (samples - 1);
        for (DriveId id : all_drives()) {
            std::snprintf(buf, sizeof(buf), "%.9g", t);
            out << buf << ',' << drive_label(id) << ',';
            std::snprintf(buf, sizeof(buf), "%.9g", amplitude(id, t));
            out << buf << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

PulseSchedule assemble_schedule(const DeviceParams& params) {
    return PulseSchedule(params, cosine_path(params.T));
}

PulseSchedule assemble_schedule(const DeviceParams& params, const PathParams& path) {
    return PulseSchedule(params, path);
}

}  // namespace bsa
