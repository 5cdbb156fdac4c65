#include "rte/similarity.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "http.h"
#include "rte/errors.h"
#include "rte/text.h"

namespace rte {

namespace {

std::string canonical(std::string_view s) {
  return text::case_fold(text::collapse_whitespace(s));
}

}  // namespace

std::map<std::u32string, int> trigram_counts(std::string_view s) {
  const std::u32string padded = U"  " + text::to_u32(canonical(s)) + U"  ";
  std::map<std::u32string, int> counts;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    ++counts[padded.substr(i, 3)];
  }
  return counts;
}

double TrigramSimilarity::similarity(std::string_view a,
                                     std::string_view b) const {
  if (canonical(a) == canonical(b)) return 1.0;
  const auto ca = trigram_counts(a);
  const auto cb = trigram_counts(b);
  long long dot = 0;
  long long na = 0;
  long long nb = 0;
  for (const auto &[g, c] : ca) {
    na += static_cast<long long>(c) * c;
    if (auto it = cb.find(g); it != cb.end()) {
      dot += static_cast<long long>(c) * it->second;
    }
  }
  for (const auto &[g, c] : cb) nb += static_cast<long long>(c) * c;
  if (na == 0 || nb == 0) return 0.0;
  const double cos = static_cast<double>(dot) /
                     std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::clamp(cos, 0.0, 1.0);
}

double ExactSimilarity::similarity(std::string_view a,
                                   std::string_view b) const {
  return canonical(a) == canonical(b) ? 1.0 : 0.0;
}

double clamped_cosine(const Vector &a, const Vector &b) {
  if (a.size() != b.size()) {
    throw SimilarityUnavailableError("embedding dimensions differ");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

RemoteEmbeddingSource::RemoteEmbeddingSource(std::string endpoint,
                                             std::string model,
                                             std::string api_key,
                                             std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      api_key_(std::move(api_key)),
      timeout_(timeout) {}

std::vector<Vector> RemoteEmbeddingSource::embed(
    const std::vector<std::string> &texts) {
  if (texts.empty()) return {};
  const nlohmann::json body = {{"input", texts}, {"model", model_}};
  http::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace_back("Authorization", "Bearer " + api_key_);
  }
  http::Response res;
  try {
    res = http::post_json(endpoint_, body.dump(), timeout_, headers);
  } catch (const http::TransportError &e) {
    throw SimilarityUnavailableError(e.what());
  }
  if (res.status != 200) {
    throw SimilarityUnavailableError("embedding endpoint returned HTTP " +
                                     std::to_string(res.status));
  }
  std::vector<Vector> out;
  try {
    const auto j = nlohmann::json::parse(res.body);
    if (j.is_array()) {
      out = j.get<std::vector<Vector>>();
    } else {
      for (const auto &d : j.at("data")) {
        out.push_back(d.at("embedding").get<Vector>());
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw SimilarityUnavailableError(
        std::string("unexpected embedding response: ") + e.what());
  }
  if (out.size() != texts.size()) {
    throw SimilarityUnavailableError("embedding count does not match inputs");
  }
  return out;
}

EmbeddingCassette EmbeddingCassette::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open embedding cassette " + path.string());
  EmbeddingCassette c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      c.add(j.at("text").get<std::string>(), j.at("vector").get<Vector>());
    } catch (const nlohmann::json::exception &e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
  return c;
}

void EmbeddingCassette::add(const std::string &text, Vector v) {
  vectors_[text] = std::move(v);
}

std::vector<Vector> EmbeddingCassette::embed(
    const std::vector<std::string> &texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto &t : texts) {
    auto it = vectors_.find(t);
    if (it == vectors_.end()) {
      throw SimilarityUnavailableError("no recorded embedding for \"" + t +
                                       "\"");
    }
    out.push_back(it->second);
  }
  return out;
}

RecordingEmbeddingSource::RecordingEmbeddingSource(
    std::unique_ptr<EmbeddingSource> inner, const std::filesystem::path &path)
    : inner_(std::move(inner)) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  out_.open(path, std::ios::app);
  if (!out_) throw IOError("cannot open " + path.string() + " for append");
}

std::vector<Vector> RecordingEmbeddingSource::embed(
    const std::vector<std::string> &texts) {
  auto vectors = inner_->embed(texts);
  std::lock_guard<std::mutex> lock(mu_);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out_ << nlohmann::json{{"text", texts[i]}, {"vector", vectors[i]}}.dump()
         << '\n';
  }
  out_.flush();
  return vectors;
}

EmbeddingSimilarity::EmbeddingSimilarity(std::unique_ptr<EmbeddingSource> source)
    : source_(std::move(source)) {}

void EmbeddingSimilarity::prepare(const std::vector<std::string> &items) {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> missing;
  for (const auto &s : items) {
    if (!cache_.contains(s) &&
        std::find(missing.begin(), missing.end(), s) == missing.end()) {
      missing.push_back(s);
    }
  }
  if (missing.empty()) return;
  auto vectors = source_->embed(missing);
  for (std::size_t i = 0; i < missing.size(); ++i) {
    cache_.emplace(missing[i], std::move(vectors[i]));
  }
}

const Vector &EmbeddingSimilarity::vector_for(const std::string &s) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(s);
  if (it != cache_.end()) return it->second;
  auto vectors = source_->embed({s});
  return cache_.emplace(s, std::move(vectors.front())).first->second;
}

double EmbeddingSimilarity::similarity(std::string_view a,
                                       std::string_view b) const {
  if (a == b) return 1.0;
  const Vector &va = vector_for(std::string(a));
  const Vector &vb = vector_for(std::string(b));
  return clamped_cosine(va, vb);
}

}  // namespace rte
