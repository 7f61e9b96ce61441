#pragma once

#include <stdexcept>
#include <string>

namespace locus {

struct EmptyInterval : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidExponent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TauOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridTooCoarse : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SphereOutsideGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NewtonDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinearSolveFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteEncountered : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyFamily : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace locus
