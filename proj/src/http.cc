#include "http.h"

#include <httplib.h>

namespace rte::http {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw TransportError("URL without scheme: " + std::string(url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) {
    return {std::string(url), "/"};
  }
  return {std::string(url.substr(0, path_start)),
          std::string(url.substr(path_start))};
}

}  // namespace

std::string join_url(std::string_view base, std::string_view path) {
  std::string out(base);
  while (!out.empty() && out.back() == '/') out.pop_back();
  if (!path.starts_with('/')) out.push_back('/');
  out += path;
  return out;
}

Response post_json(std::string_view url, const std::string &body,
                   std::chrono::milliseconds timeout, const Headers &headers) {
  const SplitUrl parts = split_url(url);
  httplib::Client client(parts.origin);
  if (!client.is_valid()) {
    throw TransportError("invalid endpoint: " + parts.origin);
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers hdrs;
  for (const auto &[k, v] : headers) hdrs.emplace(k, v);
  auto res = client.Post(parts.path, hdrs, body, "application/json");
  if (!res) {
    throw TransportError("request to " + std::string(url) +
                         " failed: " + httplib::to_string(res.error()));
  }
  return {res->status, res->body};
}

}  // namespace rte::http
