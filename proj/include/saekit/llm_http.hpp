#pragma once

// Real HTTP transport for LlmClient, kept in its own header so mock-mode
// consumers never pull in the HTTP stack. Define CPPHTTPLIB_OPENSSL_SUPPORT
// before including (and link OpenSSL) for https endpoints.

#include <httplib.h>

#include <string>

#include "saekit/errors.hpp"
#include "saekit/llm_client.hpp"

namespace saekit {

struct ParsedUrl {
  std::string scheme_host_port;  // e.g. https://api.example.com:8443
  std::string path;              // e.g. /v1/chat/completions
};

inline ParsedUrl parse_url(const std::string& url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint url needs a scheme: " + url);
  const size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.scheme_host_port = url;
    out.path = "/";
  } else {
    out.scheme_host_port = url.substr(0, path_start);
    out.path = url.substr(path_start);
  }
  return out;
}

inline Transport make_http_transport() {
  return [](const TransportRequest& req) -> TransportResult {
    TransportResult out;
    try {
      const ParsedUrl url = parse_url(req.url);
      httplib::Client client(url.scheme_host_port);
      client.set_connection_timeout(std::chrono::duration<double>(req.timeout_s));
      client.set_read_timeout(std::chrono::duration<double>(req.timeout_s));
      client.set_write_timeout(std::chrono::duration<double>(req.timeout_s));
      httplib::Headers headers;
      if (!req.bearer_token.empty())
        headers.emplace("Authorization", "Bearer " + req.bearer_token);
      const httplib::Result res =
          client.Post(url.path, headers, req.body, "application/json");
      if (!res) {
        out.error = httplib::to_string(res.error());
        return out;
      }
      out.transport_ok = true;
      out.status = res->status;
      out.body = res->body;
      return out;
    } catch (const std::exception& e) {
      out.error = e.what();
      return out;
    }
  };
}

}  // namespace saekit
