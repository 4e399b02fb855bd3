// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "folio/net/backend.hpp"

namespace folio::net {

// Shared HTTP plumbing for the chat and embedding clients.

struct ParsedUrl {
    std::string scheme_host_port;  // "http://host:1234"
    std::string base_path;         // "/v1" or ""
};

ParsedUrl parse_endpoint(const std::string& endpoint);

struct HttpResult {
    int status = 0;
    std::string body;
    long long latency_ms = 0;
};

// POSTs `body` to endpoint base_path + path with bearer auth from the
// configured environment variable. Retries transport failures and
// 408/429/5xx with exponential backoff (1s, 2s, 4s, ...) up to max_retries;
// other non-2xx statuses fail immediately. Throws BackendError carrying
// `prompt_for_error` once retries are exhausted.
HttpResult post_json_with_retries(const BackendConfig& config, const std::string& path,
                                  const json& body, const Sleeper& sleeper,
                                  const std::string& prompt_for_error);

}  // namespace folio::net
