// Copyright 2026 The feynroute Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "feynroute/threebox.hpp"

#include <string>

namespace feynroute::threebox {

State initial() {
    return State::from_coeffs({1.0, 1.0, 1.0});
}

State final_f() {
    return State::from_coeffs({1.0, 1.0, -1.0});
}

State final_g() {
    return State::from_coeffs({0.0, 1.0, 1.0});
}

State final_h() {
    return State::from_coeffs({-2.0, 1.0, -1.0});
}

std::vector<State> finals() {
    return {final_f(), final_g(), final_h()};
}

ProjectorFamily open_box(std::size_t box) {
    if (box >= kBoxes) {
        throw DimensionError("three-box system has no box " + std::to_string(box));
    }
    std::vector<double> labels(kBoxes, 0.0);
    labels[box] = 1.0;
    return ProjectorFamily::from_labels(labels);
}

ProjectorFamily unobserved() {
    return ProjectorFamily::trivial(kBoxes);
}

ProjectorFamily product_p1_p2() {
    return product_family(open_box(0), open_box(1));
}

}  // namespace feynroute::threebox
