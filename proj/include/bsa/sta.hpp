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

#ifndef BSA_STA_HPP
#define BSA_STA_HPP

#include <array>
#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "bsa/device.hpp"

namespace bsa {

/// Time-dependent angles (theta, vartheta, varphi) describing the tracked
/// frame on a three-state chain, together with their first derivatives.
///
/// Valid paths satisfy, on [0, T]:
///   varphi(0) = -pi/2, varphi(T) = +pi/2,
///   vartheta(0) + theta(0) = 0, vartheta(T) - theta(T) = pi/2,
///   and the pointwise constraint theta' = vartheta' * sin(varphi).
struct PathParams {
    double T = 1.0;
    std::function<double(double)> theta, theta_dot;
    std::function<double(double)> vartheta, vartheta_dot;
    std::function<double(double)> varphi, varphi_dot;

    /// Checks the boundary conditions and the constraint on a sample grid;
    /// throws when violated beyond 1e-10.
    void validate(int grid_points = 257) const;
};

/// Shipped default: varphi(t) = -(pi/2) cos(pi t / T), vartheta = pi/4,
/// theta = -pi/4. Closed-form derivatives.
PathParams cosine_path(double T = 1.0);

/// Orthonormal frame vectors (xi1, xi2, xi3) over the chain basis at time t.
/// Columns of the returned matrix are the frame vectors.
Eigen::Matrix3cd path_frame(const PathParams& path, double t);

/// Coefficients of the frame-tracking Hamiltonian
///   omega12 |c1><c2| + omega23 |c2><c3| + i*omega31 |c3><c1| + h.c.
/// For any valid path omega31 vanishes identically.
struct ChainCoefficients {
    double omega12 = 0.0;
    double omega23 = 0.0;
    double omega31 = 0.0;
};
ChainCoefficients counterdiabatic_coefficients(const PathParams& path, double t);

/// Dense 3x3 chain Hamiltonian built from the coefficients at time t.
Eigen::Matrix3cd chain_hamiltonian(const PathParams& path, double t);

/// Closed-form propagator sum_n |xi_n(t)><xi_n(0)|. Unitary for every t,
/// equal to the identity at t = 0. At t = T the c1/c3 block is exactly the
/// swap |c1><c3| + |c3><c1|; the c2 diagonal element is -1 (the tracked
/// middle vector returns with a flipped sign, which carries no population).
Eigen::Matrix3cd analytic_propagator(const PathParams& path, double t);

/// Time-dependent drive amplitudes for all ten lines over [0, 6T].
/// Cavity-assisted drives live on one step each and rescale the chain
/// coefficients by sqrt(gA^2 + gB^2)/gB for their step's coupling pair;
/// the B-line pulses carry area +pi/4 on step 3 and -pi/4 on step 6.
class PulseSchedule {
  public:
    PulseSchedule(DeviceParams params, PathParams path);

    double T() const { return params_.T; }
    double total_time() const { return 6.0 * params_.T; }
    const DeviceParams& params() const { return params_; }

    /// Amplitude of one drive line; zero outside the line's step.
    /// Throws when t is outside [0, 6T].
    double amplitude(DriveId id, double t) const;

    /// Largest amplitude over the schedule (pi^2/(2T) for uniform g).
    double peak_amplitude() const;

    /// Numeric integral of one drive over [t0, t1] (test/reporting helper).
    double integrate(DriveId id, double t0, double t1, int panels = 2000) const;

    /// Writes rows (t, drive_label, amplitude) for all lines on a uniform
    /// grid of `samples` points covering [0, 6T].
    void write_csv(const std::string& path, int samples = 1201) const;

  private:
    DeviceParams params_;
    PathParams path_;
    std::array<double, kDriveCount> prefactor_{};  // per line; B lines signed
};

/// Builds the full six-step schedule for the given device, using the
/// default cosine path unless another valid path is supplied.
PulseSchedule assemble_schedule(const DeviceParams& params);
PulseSchedule assemble_schedule(const DeviceParams& params, const PathParams& path);

}  // namespace bsa

#endif  // BSA_STA_HPP
