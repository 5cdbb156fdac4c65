#ifndef RTE_SIMILARITY_H_
#define RTE_SIMILARITY_H_

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rte {

// Similarity in [0, 1]; symmetric; 1.0 for identical non-empty strings.
// Implementations must be safe to call concurrently.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double similarity(std::string_view a, std::string_view b) const = 0;
  // Backend identifier recorded in outputs ("trigram", "exact", ...).
  virtual std::string id() const = 0;
  // Hint that these strings are about to be compared; lets remote backends
  // batch requests.
  virtual void prepare(const std::vector<std::string> & /*items*/) {}
};

// Cosine of character-trigram count vectors over the case-folded,
// whitespace-collapsed string padded with two spaces on each side.
class TrigramSimilarity : public SimilarityProvider {
 public:
  double similarity(std::string_view a, std::string_view b) const override;
  std::string id() const override { return "trigram"; }
};

// 1.0 when the case-folded, whitespace-collapsed strings are equal, else 0.
class ExactSimilarity : public SimilarityProvider {
 public:
  double similarity(std::string_view a, std::string_view b) const override;
  std::string id() const override { return "exact"; }
};

// Trigram counts of a string under the TrigramSimilarity padding rule.
std::map<std::u32string, int> trigram_counts(std::string_view s);

using Vector = std::vector<double>;

// Cosine similarity clamped to [0, 1]; 0 when either vector is zero.
double clamped_cosine(const Vector &a, const Vector &b);

class EmbeddingSource {
 public:
  virtual ~EmbeddingSource() = default;
  // One vector per input, in order.
  virtual std::vector<Vector> embed(const std::vector<std::string> &texts) = 0;
  virtual std::string id() const = 0;
};

// POST {"input": [...], "model": m}; accepts either a bare list of vectors
// or {"data": [{"embedding": [...]}, ...]}. Throws
// SimilarityUnavailableError on any failure.
class RemoteEmbeddingSource : public EmbeddingSource {
 public:
  RemoteEmbeddingSource(std::string endpoint, std::string model,
                        std::string api_key, std::chrono::milliseconds timeout);
  std::vector<Vector> embed(const std::vector<std::string> &texts) override;
  std::string id() const override { return "remote:" + model_; }

 private:
  std::string endpoint_;
  std::string model_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// Recorded embeddings: JSON Lines of {"text", "vector"}. A text that was
// never recorded raises SimilarityUnavailableError.
class EmbeddingCassette : public EmbeddingSource {
 public:
  static EmbeddingCassette load(const std::filesystem::path &path);

  void add(const std::string &text, Vector v);
  std::vector<Vector> embed(const std::vector<std::string> &texts) override;
  std::string id() const override { return "replay"; }

 private:
  std::unordered_map<std::string, Vector> vectors_;
};

// Forwards to `inner` and appends {"text","vector"} lines for new texts.
class RecordingEmbeddingSource : public EmbeddingSource {
 public:
  RecordingEmbeddingSource(std::unique_ptr<EmbeddingSource> inner,
                           const std::filesystem::path &path);
  std::vector<Vector> embed(const std::vector<std::string> &texts) override;
  std::string id() const override { return inner_->id(); }

 private:
  std::unique_ptr<EmbeddingSource> inner_;
  std::mutex mu_;
  std::ofstream out_;
};

// Cosine of embedding vectors, clamped to [0, 1]. Vectors are cached per
// string; identical strings short-circuit to 1.0.
class EmbeddingSimilarity : public SimilarityProvider {
 public:
  explicit EmbeddingSimilarity(std::unique_ptr<EmbeddingSource> source);

  double similarity(std::string_view a, std::string_view b) const override;
  std::string id() const override { return "embedding:" + source_->id(); }
  void prepare(const std::vector<std::string> &items) override;

 private:
  const Vector &vector_for(const std::string &s) const;

  std::unique_ptr<EmbeddingSource> source_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, Vector> cache_;
};

}  // namespace rte

#endif  // RTE_SIMILARITY_H_
