#ifndef RTE_ERRORS_H_
#define RTE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rte {

// Process exit codes, one per error class. Stable: documented in README.
enum class ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kInputEncoding = 3,
  kEmptyDocument = 4,
  kFormat = 5,
  kTaggerUnavailable = 6,
  kLLMUnavailable = 7,
  kCassetteMiss = 8,
  kSimilarityUnavailable = 9,
  kIO = 10,
};

// Base class of every error raised by the pipeline. Each subclass carries the
// exit code the CLI reports for it.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

#define RTE_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string &what) : Error(ExitCode::Code, what) {} \
  };

RTE_DEFINE_ERROR(ConfigError, kConfig)
RTE_DEFINE_ERROR(InputEncodingError, kInputEncoding)
RTE_DEFINE_ERROR(EmptyDocumentError, kEmptyDocument)
RTE_DEFINE_ERROR(FormatError, kFormat)
RTE_DEFINE_ERROR(TaggerUnavailableError, kTaggerUnavailable)
RTE_DEFINE_ERROR(LLMUnavailableError, kLLMUnavailable)
RTE_DEFINE_ERROR(SimilarityUnavailableError, kSimilarityUnavailable)
RTE_DEFINE_ERROR(IOError, kIO)

#undef RTE_DEFINE_ERROR

// Replay lookup failed: the prompt fingerprint was never recorded. Usually
// means prompt construction drifted since the cassette was made.
class CassetteMissError : public Error {
 public:
  explicit CassetteMissError(const std::string &fingerprint)
      : Error(ExitCode::kCassetteMiss,
              "cassette miss for fingerprint " + fingerprint),
        fingerprint_(fingerprint) {}

  const std::string &fingerprint() const { return fingerprint_; }

 private:
  std::string fingerprint_;
};

}  // namespace rte

#endif  // RTE_ERRORS_H_
