#pragma once

#include <stdexcept>
#include <string>

namespace srf {

/// A frustum block with 3a^2 <= (s_base - s_cap)^2: every closed form breaks down.
class DegenerateBlockError : public std::runtime_error {
 public:
  DegenerateBlockError(int layer, const std::string& what)
      : std::runtime_error(what), layer_(layer) {}
  /// Zero-based block index, or -1 when the block is not part of a lattice.
  int layer() const noexcept { return layer_; }

 private:
  int layer_;
};

/// A dual area or dual length that must be positive is not.
class SingularGeometryError : public std::runtime_error {
 public:
  SingularGeometryError(std::string edge, const std::string& what)
      : std::runtime_error(what), edge_(std::move(edge)) {}
  const std::string& edge() const noexcept { return edge_; }

 private:
  std::string edge_;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(double condition_estimate, const std::string& what)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

class RemeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-facing configuration (profile, manifest, flow config).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace srf
