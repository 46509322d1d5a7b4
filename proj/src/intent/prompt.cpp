#include "qoeslice/intent/prompt.hpp"

#include <cstdio>

namespace qoeslice::intent {

namespace {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (s.back() == '.') s.push_back('0');
  if (s == "-0.0") s = "0.0";
  return s;
}

}  // namespace

std::string format_weights(const qoe::PreferenceVector& p) {
  return "[" + format_number(p.latency) + ", " + format_number(p.reliability) + ", " + format_number(p.econ) + "]";
}

std::string Prompt::text() const {
  std::string out = preamble;
  for (const auto& ex : exemplars) {
    out += "\n\nExample:\nIntent: ";
    out += ex.intent_text;
    out += "\n";
    out += kSchema;
    out += " ";
    out += format_weights(ex.preference);
  }
  out += "\n\nIntent: ";
  out += query;
  out += "\n";
  out += schema;
  return out;
}

Prompt build_prompt(std::string_view query, std::vector<Exemplar> exemplars) {
  Prompt p;
  p.preamble = std::string(kPreamble);
  p.exemplars = std::move(exemplars);
  p.query = std::string(query);
  p.schema = std::string(kSchema);
  return p;
}

Prompt build_prompt(std::string_view query, std::span<const ScoredEntry> retrieved) {
  std::vector<Exemplar> exemplars;
  exemplars.reserve(retrieved.size());
  for (const auto& r : retrieved) exemplars.push_back({r.entry.intent_text, r.entry.preference});
  return build_prompt(query, std::move(exemplars));
}

}  // namespace qoeslice::intent
