#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "qoeslice/env/types.hpp"

namespace qoeslice::env {

// Natural-language intent templates, keyed by QoE class.
struct IntentTemplates {
  std::array<std::vector<std::string>, kNumClasses> by_class;

  const std::vector<std::string>& operator[](QoEClassId id) const { return by_class[index_of(id)]; }
};

IntentTemplates parse_intent_templates(std::string_view json_text);
IntentTemplates load_intent_templates(const std::string& path);

// The table shipped in data/intent_templates.json, compiled into the library.
const IntentTemplates& default_intent_templates();

}  // namespace qoeslice::env
