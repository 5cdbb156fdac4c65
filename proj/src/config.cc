#include "rte/config.h"

#include <cstdlib>
#include <set>

#include "rte/errors.h"
#include "rte/io.h"

namespace rte {

namespace {

// Reads known keys from one JSON object and rejects the rest.
class Section {
 public:
  Section(const nlohmann::json &j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <typename T>
  void read(const char *key, T &out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  template <typename Enum>
  void read_enum(const char *key, Enum &out, Enum (*parse)(std::string_view)) {
    std::string s;
    read(key, s);
    if (j_.contains(key)) out = parse(s);
  }

  const nlohmann::json *child(const char *key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto &[k, v] : j_.items()) {
      if (!seen_.contains(k)) throw ConfigError(path_ + ": unknown key " + k);
    }
  }

 private:
  const nlohmann::json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename T>
void check_range(const char *name, T v, T lo, T hi) {
  if (v < lo || v > hi) {
    throw ConfigError(std::string(name) + " out of range [" +
                      std::to_string(lo) + ", " + std::to_string(hi) +
                      "]: " + std::to_string(v));
  }
}

void check_unit(const char *name, double v) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must be in (0, 1]: " +
                      std::to_string(v));
  }
}

}  // namespace

std::string_view tagger_mode_name(TaggerMode m) {
  return m == TaggerMode::kBuiltin ? "builtin" : "remote";
}

std::string_view llm_mode_name(LLMMode m) {
  switch (m) {
    case LLMMode::kReplay: return "replay";
    case LLMMode::kRecord: return "record";
    case LLMMode::kLive: return "live";
  }
  return "replay";
}

std::string_view similarity_backend_name(SimilarityBackend b) {
  switch (b) {
    case SimilarityBackend::kTrigram: return "trigram";
    case SimilarityBackend::kExact: return "exact";
    case SimilarityBackend::kEmbedding: return "embedding";
  }
  return "trigram";
}

TaggerMode parse_tagger_mode(std::string_view s) {
  if (s == "builtin") return TaggerMode::kBuiltin;
  if (s == "remote") return TaggerMode::kRemote;
  throw ConfigError("unknown tagger mode: " + std::string(s));
}

LLMMode parse_llm_mode(std::string_view s) {
  if (s == "replay") return LLMMode::kReplay;
  if (s == "record") return LLMMode::kRecord;
  if (s == "live") return LLMMode::kLive;
  throw ConfigError("unknown LLM mode: " + std::string(s));
}

SimilarityBackend parse_similarity_backend(std::string_view s) {
  if (s == "trigram") return SimilarityBackend::kTrigram;
  if (s == "exact") return SimilarityBackend::kExact;
  if (s == "embedding") return SimilarityBackend::kEmbedding;
  throw ConfigError("unknown similarity backend: " + std::string(s));
}

void RunConfig::validate() const {
  const auto &r = llm.relation;
  if (r.model_name.empty()) throw ConfigError("llm.model must not be empty");
  check_range("llm.temperature", r.temperature, 0.0, 1.0);
  check_range("llm.retries", r.retries, 1, 10);
  check_range("llm.token_lo", r.token_lo, 1, 32768);
  check_range("llm.token_hi", r.token_hi, r.token_lo, 32768);
  check_range("llm.multiplier", r.multiplier, 1, 100);
  check_range("llm.tokens_per_triple", r.tokens_per_triple, 1, 1000);
  check_range("llm.max_in_flight", r.max_in_flight, 1, 64);
  check_range("llm.timeout_ms", llm.timeout_ms, 1, 600000);
  check_range("tagger.timeout_ms", tagger.timeout_ms, 1, 600000);
  check_range("embedding.timeout_ms", embedding.timeout_ms, 1, 600000);
  check_unit("alignment.threshold", alignment.threshold);
  for (std::size_t i = 0; i < evaluation.taus.size(); ++i) {
    check_unit("evaluation.taus", evaluation.taus[i]);
    if (i > 0 && !(evaluation.taus[i] > evaluation.taus[i - 1])) {
      throw ConfigError("evaluation.taus must be strictly increasing");
    }
  }
}

nlohmann::ordered_json to_json(const RunConfig &c) {
  const auto &r = c.llm.relation;
  nlohmann::ordered_json j;
  j["document"] = c.document;
  j["out_dir"] = c.out_dir;
  j["tagger"] = {{"mode", tagger_mode_name(c.tagger.mode)},
                 {"endpoint", c.tagger.endpoint},
                 {"fallback", c.tagger.fallback},
                 {"timeout_ms", c.tagger.timeout_ms}};
  j["llm"] = {{"mode", llm_mode_name(c.llm.mode)},
              {"endpoint", c.llm.endpoint},
              {"cassette", c.llm.cassette},
              {"timeout_ms", c.llm.timeout_ms},
              {"model", r.model_name},
              {"temperature", r.temperature},
              {"retries", r.retries},
              {"token_lo", r.token_lo},
              {"token_hi", r.token_hi},
              {"multiplier", r.multiplier},
              {"tokens_per_triple", r.tokens_per_triple},
              {"max_in_flight", r.max_in_flight},
              {"orphan_on_empty_verbs", r.orphan_on_empty_verbs}};
  j["validation"] = {{"policy", policy_name(c.policy)}};
  j["alignment"] = {{"threshold", c.alignment.threshold},
                    {"backend", similarity_backend_name(c.alignment.backend)}};
  j["embedding"] = {{"endpoint", c.embedding.endpoint},
                    {"model", c.embedding.model},
                    {"cassette", c.embedding.cassette},
                    {"timeout_ms", c.embedding.timeout_ms}};
  j["evaluation"] = {
      {"backend", similarity_backend_name(c.evaluation.backend)},
      {"taus", c.evaluation.taus}};
  return j;
}

RunConfig run_config_from_json(const nlohmann::json &j) {
  RunConfig c;
  Section top(j, "config");
  top.read("document", c.document);
  top.read("out_dir", c.out_dir);
  if (const auto *t = top.child("tagger")) {
    Section s(*t, "tagger");
    s.read_enum("mode", c.tagger.mode, parse_tagger_mode);
    s.read("endpoint", c.tagger.endpoint);
    s.read("fallback", c.tagger.fallback);
    s.read("timeout_ms", c.tagger.timeout_ms);
    s.finish();
  }
  if (const auto *l = top.child("llm")) {
    auto &r = c.llm.relation;
    Section s(*l, "llm");
    s.read_enum("mode", c.llm.mode, parse_llm_mode);
    s.read("endpoint", c.llm.endpoint);
    s.read("cassette", c.llm.cassette);
    s.read("timeout_ms", c.llm.timeout_ms);
    s.read("model", r.model_name);
    s.read("temperature", r.temperature);
    s.read("retries", r.retries);
    s.read("token_lo", r.token_lo);
    s.read("token_hi", r.token_hi);
    s.read("multiplier", r.multiplier);
    s.read("tokens_per_triple", r.tokens_per_triple);
    s.read("max_in_flight", r.max_in_flight);
    s.read("orphan_on_empty_verbs", r.orphan_on_empty_verbs);
    s.finish();
  }
  if (const auto *v = top.child("validation")) {
    Section s(*v, "validation");
    s.read_enum("policy", c.policy, parse_policy);
    s.finish();
  }
  if (const auto *a = top.child("alignment")) {
    Section s(*a, "alignment");
    s.read("threshold", c.alignment.threshold);
    s.read_enum("backend", c.alignment.backend, parse_similarity_backend);
    s.finish();
  }
  if (const auto *e = top.child("embedding")) {
    Section s(*e, "embedding");
    s.read("endpoint", c.embedding.endpoint);
    s.read("model", c.embedding.model);
    s.read("cassette", c.embedding.cassette);
    s.read("timeout_ms", c.embedding.timeout_ms);
    s.finish();
  }
  if (const auto *e = top.child("evaluation")) {
    Section s(*e, "evaluation");
    s.read_enum("backend", c.evaluation.backend, parse_similarity_backend);
    s.read("taus", c.evaluation.taus);
    s.finish();
  }
  top.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path &path) {
  const auto j = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError(path.string() + ": invalid JSON");
  return run_config_from_json(j);
}

void apply_env_overrides(RunConfig &c, const EnvLookup &env) {
  if (auto v = env("RTE_LLM_ENDPOINT")) c.llm.endpoint = *v;
  if (auto v = env("RTE_LLM_API_KEY")) c.llm.api_key = *v;
  if (auto v = env("RTE_TAGGER_ENDPOINT")) c.tagger.endpoint = *v;
  if (auto v = env("RTE_EMBEDDING_ENDPOINT")) c.embedding.endpoint = *v;
  if (auto v = env("RTE_EMBEDDING_API_KEY")) c.embedding.api_key = *v;
}

std::optional<std::string> process_env(const char *name) {
  const char *v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace rte
