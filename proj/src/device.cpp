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

#include "bsa/device.hpp"

#include <algorithm>
#include <stdexcept>

namespace bsa {

double DeviceParams::max_coupling() const {
    return std::max({g23A1, g24A1, g23A2, g24A2, gB1, gB2});
}

void DeviceParams::validate() const {
    if (g23A1 <= 0 || g24A1 <= 0 || g23A2 <= 0 || g24A2 <= 0 || gB1 <= 0 || gB2 <= 0) {
        throw std::invalid_argument("all couplings must be positive");
    }
    if (T <= 0) throw std::invalid_argument("step duration T must be positive");
}

DeviceParams uniform_device(double g, double T) {
    DeviceParams p;
    p.g23A1 = p.g24A1 = p.g23A2 = p.g24A2 = p.gB1 = p.gB2 = g;
    p.T = T;
    p.validate();
    return p;
}

const std::array<DriveId, kDriveCount>& all_drives() {
    static const std::array<DriveId, kDriveCount> ids = {
        DriveId::O03A1, DriveId::O13A1, DriveId::O04A1, DriveId::O14A1,
        DriveId::O03A2, DriveId::O13A2, DriveId::O04A2, DriveId::O14A2,
        DriveId::OB1,   DriveId::OB2,
    };
    return ids;
}

std::string drive_label(DriveId id) {
    switch (id) {
        case DriveId::O03A1: return "Omega03A1";
        case DriveId::O13A1: return "Omega13A1";
        case DriveId::O04A1: return "Omega04A1";
        case DriveId::O14A1: return "Omega14A1";
        case DriveId::O03A2: return "Omega03A2";
        case DriveId::O13A2: return "Omega13A2";
        case DriveId::O04A2: return "Omega04A2";
        case DriveId::O14A2: return "Omega14A2";
        case DriveId::OB1: return "OmegaB1";
        case DriveId::OB2: return "OmegaB2";
    }
    throw std::invalid_argument("unknown drive id");
}

}  // namespace bsa
