#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace concord {

// Failure kinds surfaced by the library. The CLI maps these to exit codes;
// index reports carry them for slots that are undefined on a given input.
enum class Errc {
  none = 0,
  empty_input,
  missing_label,
  invalid_labels,
  io_error,
  parse_error,
  length_mismatch,
  too_few_items,
  degenerate_normalization,
  invalid_distribution,
  invalid_spec,
  allocation_refused,
  cap_exceeded,
  overflow,
};

constexpr std::string_view error_name(Errc code) noexcept {
  switch (code) {
    case Errc::none: return "None";
    case Errc::empty_input: return "EmptyInput";
    case Errc::missing_label: return "MissingLabel";
    case Errc::invalid_labels: return "InvalidLabels";
    case Errc::io_error: return "IoError";
    case Errc::parse_error: return "ParseError";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::too_few_items: return "TooFewItems";
    case Errc::degenerate_normalization: return "DegenerateNormalization";
    case Errc::invalid_distribution: return "InvalidDistribution";
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::allocation_refused: return "AllocationRefused";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::overflow: return "Overflow";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace concord
