#ifndef RTE_SRC_HTTP_H_
#define RTE_SRC_HTTP_H_

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rte::http {

struct Response {
  int status = 0;
  std::string body;
};

// Connection-level failure (refused, timed out, bad URL).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

// POSTs a JSON body to an absolute http(s) URL.
Response post_json(std::string_view url, const std::string &body,
                   std::chrono::milliseconds timeout,
                   const Headers &headers = {});

// Joins a base URL and a path without doubling slashes.
std::string join_url(std::string_view base, std::string_view path);

}  // namespace rte::http

#endif  // RTE_SRC_HTTP_H_
