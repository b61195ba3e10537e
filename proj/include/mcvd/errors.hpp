#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcvd {

/// Invalid configuration or region parameters. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point inconsistency in the wall intersection solver.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A step kept leaving the vessel after the allowed number of reflections.
/// Usually means dt is too large for the vessel radius.
class MaxBouncesExceeded : public std::runtime_error {
 public:
  MaxBouncesExceeded(const std::string& what, std::uint64_t molecule = 0,
                     std::uint64_t step = 0)
      : std::runtime_error(what), molecule_id(molecule), step_index(step) {}

  std::uint64_t molecule_id;
  std::uint64_t step_index;
};

class EmptySample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooFewSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcvd
