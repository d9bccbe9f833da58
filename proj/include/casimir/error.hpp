#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace casimir {

enum class ErrorKind {
  invalid_argument,
  invalid_model,
  static_pole,                // Drude-type pole at omega = 0
  zero_frequency_convention,  // xi = 0 of a model that diverges there
  reflection_pole,
  light_cone_singular,
  loop_divergence,
  matsubara_divergence,
  accuracy_not_reached,
  velocity_guard,
  not_rarified,
  contract_violation,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace casimir
