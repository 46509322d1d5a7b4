#include "qoeslice/env/intent_templates.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qoeslice/common/errors.hpp"
#include "qoeslice/data/embedded_data.hpp"

namespace qoeslice::env {

IntentTemplates parse_intent_templates(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed intent template table: ") + e.what());
  }
  IntentTemplates t;
  for (const QoEClassId id : kAllClasses) {
    const std::string key(to_string(id));
    if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
      throw ConfigError("intent template table lacks templates for " + key);
    }
    for (const auto& s : j[key]) t.by_class[index_of(id)].push_back(s.get<std::string>());
  }
  return t;
}

IntentTemplates load_intent_templates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open intent template file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_intent_templates(ss.str());
}

const IntentTemplates& default_intent_templates() {
  static const IntentTemplates table = parse_intent_templates(data::kIntentTemplatesJson);
  return table;
}

}  // namespace qoeslice::env
