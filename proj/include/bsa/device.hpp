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

#ifndef BSA_DEVICE_HPP
#define BSA_DEVICE_HPP

#include <array>
#include <string>

namespace bsa {

/// Device parameters. Couplings are angular frequencies in units of 1/T,
/// the step duration T is the time unit (default 1).
struct DeviceParams {
    double g23A1 = 66.0;
    double g24A1 = 66.0;
    double g23A2 = 66.0;
    double g24A2 = 66.0;
    double gB1 = 66.0;
    double gB2 = 66.0;
    double T = 1.0;
    double epsilon1 = 1.5707963267948966;  // pi/2 phase shift on the B1 drive
    double epsilon2 = 1.5707963267948966;

    double max_coupling() const;
    void validate() const;  // couplings > 0, T > 0
};

/// All six couplings equal to g.
DeviceParams uniform_device(double g, double T = 1.0);

/// The ten drive lines of the protocol, in schedule order.
enum class DriveId {
    O03A1 = 0,
    O13A1,
    O04A1,
    O14A1,
    O03A2,
    O13A2,
    O04A2,
    O14A2,
    OB1,
    OB2,
};
inline constexpr int kDriveCount = 10;

const std::array<DriveId, kDriveCount>& all_drives();
std::string drive_label(DriveId id);

}  // namespace bsa

#endif  // BSA_DEVICE_HPP
