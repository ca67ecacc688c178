#pragma once

#include <httplib.h>

#include <memory>
#include <string>

#include "gateway.hpp"

namespace cascadesum {

struct EndpointParts {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // no trailing slash
};

inline EndpointParts split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw GatewayError(Errc::TransportError, "endpoint '" + url + "' lacks a scheme");
  }
  const auto slash = url.find('/', scheme + 3);
  EndpointParts parts;
  parts.origin = url.substr(0, slash);
  if (slash != std::string::npos) parts.base_path = url.substr(slash);
  while (!parts.base_path.empty() && parts.base_path.back() == '/') parts.base_path.pop_back();
  return parts;
}

/// Plain-HTTP transport backed by cpp-httplib. A fresh connection per request
/// keeps the object stateless and shareable across threads.
class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(int connect_timeout_s = 10, int read_timeout_s = 120)
      : connect_timeout_s_(connect_timeout_s), read_timeout_s_(read_timeout_s) {}

  HttpResponse post(const std::string& endpoint_url, const std::string& path, const std::string& body,
                    const HttpHeaders& headers) const override {
    const auto parts = split_endpoint(endpoint_url);
    httplib::Client client(parts.origin);
    if (!client.is_valid()) throw GatewayError(Errc::TransportError, "unsupported endpoint '" + endpoint_url + "'");
    client.set_connection_timeout(connect_timeout_s_, 0);
    client.set_read_timeout(read_timeout_s_, 0);
    httplib::Headers h;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        h.emplace(k, v);
      }
    }
    auto res = client.Post(parts.base_path + path, h, body, content_type);
    if (!res) {
      throw GatewayError(Errc::TransportError,
                         "POST " + endpoint_url + path + ": " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
  }

 private:
  int connect_timeout_s_;
  int read_timeout_s_;
};

inline std::shared_ptr<const HttpTransport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

}  // namespace cascadesum
