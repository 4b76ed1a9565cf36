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

#ifndef FEYNROUTE_THREEBOX_HPP
#define FEYNROUTE_THREEBOX_HPP

#include <cstddef>
#include <vector>

#include "feynroute/hilbert.hpp"

// The three-box system: a particle in boxes |1>, |2>, |3> (zero-based
// indices 0, 1, 2), pre-selected in i and post-selected in f.
namespace feynroute::threebox {

inline constexpr std::size_t kBoxes = 3;

/// (|1> + |2> + |3>) / sqrt(3)
State initial();
/// (|1> + |2> - |3>) / sqrt(3)
State final_f();
/// (|2> + |3>) / sqrt(2)
State final_g();
/// (-2|1> + |2> - |3>) / sqrt(6)
State final_h();
/// {f, g, h}
std::vector<State> finals();

/// |box><box| as a family with labels 1 on `box` and 0 elsewhere.
ProjectorFamily open_box(std::size_t box);
/// No measurement: all labels equal.
ProjectorFamily unobserved();
/// P_1 x P_2 = diag(0, 0, 0).
ProjectorFamily product_p1_p2();

}  // namespace feynroute::threebox

#endif  // FEYNROUTE_THREEBOX_HPP
