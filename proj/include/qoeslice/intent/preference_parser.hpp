#pragma once

#include <stdexcept>
#include <string_view>

#include "qoeslice/qoe/preference.hpp"

namespace qoeslice::intent {

class PreferenceParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Extracts a preference vector from free-form model output. Uses the first
// bracketed group holding at least three numbers and takes its first three.
// Negative or non-finite weights are rejected; sums within [0.5, 2] are
// renormalised onto the simplex, anything else is rejected.
qoe::PreferenceVector parse_preference(std::string_view text);

}  // namespace qoeslice::intent
