#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace muonscale {

// Bad user-facing configuration: unknown problem name, invalid parameter
// range, mismatched shapes, malformed config document.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// An objective evaluated to a non-finite value during a run.
class divergence_error : public std::runtime_error {
 public:
  divergence_error(const std::string& what, std::int64_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

// A runtime assertion derived from the method's analysis failed. Carries the
// name of the violated inequality and the step index where it broke.
class invariant_error : public std::runtime_error {
 public:
  invariant_error(const std::string& name, std::int64_t step, double violation)
      : std::runtime_error(name + " violated at step " + std::to_string(step) +
                           " (margin " + std::to_string(violation) + ")"),
        name_(name),
        step_(step),
        violation_(violation) {}
  const std::string& invariant_name() const { return name_; }
  std::int64_t step() const { return step_; }
  double violation() const { return violation_; }

 private:
  std::string name_;
  std::int64_t step_;
  double violation_;
};

// Failure inside a test oracle (non-finite value, bad input).
class oracle_error : public std::runtime_error {
 public:
  explicit oracle_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace muonscale
