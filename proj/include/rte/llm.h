#ifndef RTE_LLM_H_
#define RTE_LLM_H_

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace rte {

struct PromptRequest {
  std::string sentence_id;
  std::string prompt_text;
  double temperature = 0.2;
  int max_new_tokens = 256;
  std::string model_name;
};

// SHA-256 over the canonical JSON of (model, prompt, temperature,
// max_new_tokens). Sentence id is not part of it: identical prompts share
// recordings.
std::string fingerprint(const PromptRequest &request);

// Backend abstraction. `attempt` is 1-based; implementations must be safe to
// call concurrently.
class LLMClient {
 public:
  virtual ~LLMClient() = default;
  virtual std::string complete(const PromptRequest &request, int attempt) = 0;
};

// Chat-completions endpoint client.
class ChatCompletionsClient : public LLMClient {
 public:
  ChatCompletionsClient(std::string endpoint, std::string api_key,
                        std::chrono::milliseconds timeout);

  // Throws LLMUnavailableError on transport failure, non-200 status or a
  // response without choices[0].message.content.
  std::string complete(const PromptRequest &request, int attempt) override;

 private:
  std::string endpoint_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// JSON Lines file of {"fingerprint", "response"} records. Several records
// for one fingerprint are the responses to successive attempts.
class Cassette {
 public:
  Cassette() = default;

  // Throws FormatError on a malformed line, IOError if unreadable.
  static Cassette load(const std::filesystem::path &path);

  void add(const std::string &fingerprint, std::string response);

  // Response for the given attempt. Attempts past the recorded count reuse
  // the last recording. Throws CassetteMissError if nothing was recorded.
  const std::string &lookup(const std::string &fingerprint, int attempt) const;

  bool contains(const std::string &fingerprint) const;
  std::size_t size() const;

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

class ReplayClient : public LLMClient {
 public:
  explicit ReplayClient(Cassette cassette);

  std::string complete(const PromptRequest &request, int attempt) override;

 private:
  Cassette cassette_;
};

// Forwards to `inner` and appends every response to a cassette file through a
// single serialized writer.
class RecordingClient : public LLMClient {
 public:
  RecordingClient(std::unique_ptr<LLMClient> inner,
                  const std::filesystem::path &path);

  std::string complete(const PromptRequest &request, int attempt) override;

 private:
  std::unique_ptr<LLMClient> inner_;
  std::mutex mu_;
  std::ofstream out_;
};

// Calls `complete` and returns the raw model text.
std::string infer(const PromptRequest &request, LLMClient &client,
                  int attempt = 1);

}  // namespace rte

#endif  // RTE_LLM_H_
