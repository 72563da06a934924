#pragma once

#include <stdexcept>

namespace consim {

// One exception type per failure class the library reports. Everything
// derives from std::logic_error or std::runtime_error so callers that do
// not care about the distinction can catch coarsely.

// Graph family size out of its documented range (n too small, odd where
// even is required, not a perfect square for grids).
struct SizeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Scalar parameter outside its documented range (step sizes, radii,
// tolerances, momentum bounds).
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Vector/matrix dimensions do not agree.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation requires a connected graph and the input is not.
struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix fails a structural precondition (e.g. not symmetric).
struct MatrixError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A formation offset is missing for an edge of the graph.
struct IncompleteSpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Formation offsets violate antisymmetry as stored.
struct MalformedSpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Formation offsets admit no realization (inconsistent around a cycle).
struct FormationInvalidError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Metric requested data the objective does not carry (unknown optimum).
struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Benchmark configuration rejected.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File could not be read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace consim
