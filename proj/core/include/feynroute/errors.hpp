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

#ifndef FEYNROUTE_ERRORS_HPP
#define FEYNROUTE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace feynroute {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A zero vector was passed where a normalizable state is required.
class NormalizationError : public Error {
   public:
    using Error::Error;
};

/// Operands live in Hilbert spaces of different dimension, or a path,
/// weight list or label list has the wrong length.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// Malformed operator: not square, not Hermitian where required, or
/// non-finite entries.
class OperatorError : public Error {
   public:
    using Error::Error;
};

/// A propagator that must be unitary is not.
class UnitarityError : public Error {
   public:
    using Error::Error;
};

/// A list of final states is not an orthonormal basis.
class BasisError : public Error {
   public:
    using Error::Error;
};

/// Conditioning on an event of zero probability.
class ConditioningError : public Error {
   public:
    using Error::Error;
};

/// Path enumeration would exceed the configured cap.
class PathExplosionError : public Error {
   public:
    using Error::Error;
};

/// A path ensemble carries no functional values but one was required.
class FunctionalError : public Error {
   public:
    using Error::Error;
};

/// Malformed feasibility problem or classical network.
class ConstraintError : public Error {
   public:
    using Error::Error;
};

}  // namespace feynroute

#endif  // FEYNROUTE_ERRORS_HPP
