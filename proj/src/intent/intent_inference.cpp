#include "qoeslice/intent/intent_inference.hpp"

#include "qoeslice/common/errors.hpp"
#include "qoeslice/intent/preference_parser.hpp"

namespace qoeslice::intent {

void to_json(nlohmann::json& j, const InferenceConfig& cfg) {
  j = nlohmann::json{{"k", cfg.k}, {"aging_lambda", cfg.aging_lambda}, {"attempts", cfg.attempts}};
  auto& d = j["class_defaults"];
  for (const auto c : env::kAllClasses) {
    const auto& p = cfg.class_default(c);
    d[env::to_string(c)] = {p.latency, p.reliability, p.econ};
  }
}

void from_json(const nlohmann::json& j, InferenceConfig& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "k") {
      cfg.k = value.get<std::size_t>();
    } else if (key == "aging_lambda") {
      cfg.aging_lambda = value.get<double>();
    } else if (key == "attempts") {
      cfg.attempts = value.get<int>();
    } else if (key == "class_defaults") {
      for (const auto& [name, w] : value.items()) {
        const auto c = env::class_from_string(name);
        const auto arr = w.get<std::array<double, 3>>();
        const qoe::PreferenceVector p{arr[0], arr[1], arr[2]};
        if (!p.on_simplex()) throw ConfigError("class default for " + name + " is not on the simplex");
        cfg.class_defaults[env::index_of(c)] = p;
      }
    } else {
      throw ConfigError("unknown intent config key: " + key);
    }
  }
  if (cfg.k < 1) throw ConfigError("intent.k must be at least 1");
  if (cfg.attempts < 1) throw ConfigError("intent.attempts must be at least 1");
  if (cfg.aging_lambda < 0.0) throw ConfigError("intent.aging_lambda must be non-negative");
}

IntentInference::IntentInference(const Embedder& embedder, LlmClient& client, InferenceConfig cfg)
    : embedder_(embedder), client_(client), cfg_(std::move(cfg)) {}

Inference IntentInference::infer(const env::SliceRequest& request, const IntentStore& store) const {
  Inference out;
  const auto query = embedder_.embed(request.intent_text);
  if (!store.empty()) out.exemplars = retrieve_topk(store, query, cfg_.k, store.now(), cfg_.aging_lambda);
  out.prompt = build_prompt(request.intent_text, out.exemplars);
  const std::string text = out.prompt.text();

  for (int attempt = 0; attempt < cfg_.attempts; ++attempt) {
    ++out.attempts;
    try {
      out.raw_response = client_.complete(text);
      out.prefs = parse_preference(out.raw_response);
      return out;
    } catch (const PreferenceParseError& e) {
      out.error = e.what();
    } catch (const LlmError& e) {
      out.error = e.what();
    }
  }
  out.prefs = cfg_.class_default(request.qoe_class);
  out.fell_back = true;
  ++failures_;
  return out;
}

qoe::PreferenceVector infer_preferences(const env::SliceRequest& request, const IntentStore& store,
                                        LlmClient& client, std::size_t k) {
  static const HashingEmbedder embedder;
  InferenceConfig cfg;
  cfg.k = k;
  return IntentInference(embedder, client, cfg).infer(request, store).prefs;
}

}  // namespace qoeslice::intent
