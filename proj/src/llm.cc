#include "rte/llm.h"

#include <nlohmann/json.hpp>

#include "http.h"
#include "rte/errors.h"
#include "rte/text.h"

namespace rte {

std::string fingerprint(const PromptRequest &request) {
  // nlohmann::json objects are key-sorted, so the dump is canonical.
  const nlohmann::json canonical = {
      {"model", request.model_name},
      {"prompt", request.prompt_text},
      {"temperature", request.temperature},
      {"max_new_tokens", request.max_new_tokens}};
  return text::sha256_hex(canonical.dump());
}

ChatCompletionsClient::ChatCompletionsClient(std::string endpoint,
                                             std::string api_key,
                                             std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)),
      api_key_(std::move(api_key)),
      timeout_(timeout) {}

std::string ChatCompletionsClient::complete(const PromptRequest &request,
                                            int /*attempt*/) {
  const nlohmann::json body = {
      {"model", request.model_name},
      {"messages", {{{"role", "user"}, {"content", request.prompt_text}}}},
      {"temperature", request.temperature},
      {"max_tokens", request.max_new_tokens}};
  http::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace_back("Authorization", "Bearer " + api_key_);
  }
  http::Response res;
  try {
    res = http::post_json(endpoint_, body.dump(), timeout_, headers);
  } catch (const http::TransportError &e) {
    throw LLMUnavailableError(e.what());
  }
  if (res.status != 200) {
    throw LLMUnavailableError("LLM endpoint returned HTTP " +
                              std::to_string(res.status));
  }
  try {
    const auto j = nlohmann::json::parse(res.body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw LLMUnavailableError(std::string("unexpected LLM response: ") +
                              e.what());
  }
}

Cassette Cassette::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open cassette " + path.string());
  Cassette c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      c.add(j.at("fingerprint").get<std::string>(),
            j.at("response").get<std::string>());
    } catch (const nlohmann::json::exception &e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
  return c;
}

void Cassette::add(const std::string &fingerprint, std::string response) {
  entries_[fingerprint].push_back(std::move(response));
}

const std::string &Cassette::lookup(const std::string &fingerprint,
                                    int attempt) const {
  auto it = entries_.find(fingerprint);
  if (it == entries_.end() || it->second.empty()) {
    throw CassetteMissError(fingerprint);
  }
  const auto &responses = it->second;
  const std::size_t idx =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(attempt, 1)) - 1,
                            responses.size() - 1);
  return responses[idx];
}

bool Cassette::contains(const std::string &fingerprint) const {
  return entries_.contains(fingerprint);
}

std::size_t Cassette::size() const {
  std::size_t n = 0;
  for (const auto &[_, v] : entries_) n += v.size();
  return n;
}

ReplayClient::ReplayClient(Cassette cassette)
    : cassette_(std::move(cassette)) {}

std::string ReplayClient::complete(const PromptRequest &request, int attempt) {
  return cassette_.lookup(fingerprint(request), attempt);
}

RecordingClient::RecordingClient(std::unique_ptr<LLMClient> inner,
                                 const std::filesystem::path &path)
    : inner_(std::move(inner)) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  out_.open(path, std::ios::app);
  if (!out_) throw IOError("cannot open cassette for append: " + path.string());
}

std::string RecordingClient::complete(const PromptRequest &request,
                                      int attempt) {
  std::string response = inner_->complete(request, attempt);
  const nlohmann::json record = {{"fingerprint", fingerprint(request)},
                                 {"response", response}};
  std::lock_guard<std::mutex> lock(mu_);
  out_ << record.dump() << '\n';
  out_.flush();
  return response;
}

std::string infer(const PromptRequest &request, LLMClient &client,
                  int attempt) {
  return client.complete(request, attempt);
}

}  // namespace rte
