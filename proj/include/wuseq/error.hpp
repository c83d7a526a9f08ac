#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace wuseq {

// Malformed files, invalid options, degenerate inputs. CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical routine could not meet its contract. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          std::optional<double> best_estimate = std::nullopt)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  auto best_estimate() const -> std::optional<double> { return best_estimate_; }

 private:
  std::optional<double> best_estimate_;
};

}  // namespace wuseq
