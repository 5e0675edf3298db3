#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddrhc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using AgentPair = std::pair<int, int>;
using PairSet = std::vector<AgentPair>;  // kept sorted, unique

/// Bad construction inputs (dimensions, indices, config fields).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gain synthesis failed (singular stacked system, missing payload).
class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A gain or harness round was not available when required.
class SchedulingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A message violated the protocol-level link restriction.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Restricted neighborhoods violate the first-d feasibility precondition.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Satellite mass would become non-positive.
class PropellantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ddrhc
