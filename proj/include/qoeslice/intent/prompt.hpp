#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qoeslice/intent/intent_store.hpp"
#include "qoeslice/qoe/preference.hpp"

namespace qoeslice::intent {

struct Exemplar {
  std::string intent_text;
  qoe::PreferenceVector preference;
};

struct Prompt {
  std::string preamble;
  std::vector<Exemplar> exemplars;  // most relevant first
  std::string query;
  std::string schema;  // trailing output cue

  // Blocks joined by blank lines: preamble, one block per exemplar, then the
  // query line followed by the schema cue.
  std::string text() const;
};

inline constexpr std::string_view kPreamble =
    "You assign QoE preference weights (latency, reliability, economics) summing to 1 for network slice "
    "requests.";
inline constexpr std::string_view kSchema = "Weights:";

Prompt build_prompt(std::string_view query, std::span<const ScoredEntry> retrieved);
Prompt build_prompt(std::string_view query, std::vector<Exemplar> exemplars);

// "[a, b, c]" with up to four decimals, trailing zeros trimmed.
std::string format_weights(const qoe::PreferenceVector& p);

}  // namespace qoeslice::intent
