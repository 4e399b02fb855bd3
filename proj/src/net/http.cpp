// SPDX-License-Identifier: Apache-2.0
#include "folio/net/http.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>

#include <httplib.h>

namespace folio::net {

ParsedUrl parse_endpoint(const std::string& endpoint) {
    const std::size_t scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint must include a scheme: " + endpoint);
    const std::size_t path_start = endpoint.find('/', scheme_end + 3);
    ParsedUrl url;
    if (path_start == std::string::npos) {
        url.scheme_host_port = endpoint;
    } else {
        url.scheme_host_port = endpoint.substr(0, path_start);
        url.base_path = endpoint.substr(path_start);
        while (!url.base_path.empty() && url.base_path.back() == '/')
            url.base_path.pop_back();
    }
    return url;
}

HttpResult post_json_with_retries(const BackendConfig& config, const std::string& path,
                                  const json& body, const Sleeper& sleeper,
                                  const std::string& prompt_for_error) {
    const ParsedUrl url = parse_endpoint(config.endpoint);
    const std::string payload = body.dump();
    const std::string full_path = url.base_path + path;

    httplib::Client client(url.scheme_host_port);
    const auto timeout = std::chrono::milliseconds(
        static_cast<long long>(config.timeout_seconds * 1000.0));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
    client.enable_server_certificate_verification(config.verify_tls);
#endif

    httplib::Headers headers;
    if (!config.auth_env.empty()) {
        if (const char* token = std::getenv(config.auth_env.c_str()); token && *token)
            headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        const auto start = std::chrono::steady_clock::now();
        httplib::Result result = client.Post(full_path, headers, payload, "application/json");
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);

        if (result) {
            const int status = result->status;
            if (status >= 200 && status < 300)
                return {status, result->body, elapsed.count()};
            const bool transient = status == 408 || status == 429 || status >= 500;
            last_error = "backend returned status " + std::to_string(status);
            if (!transient)
                throw BackendError(last_error + " from " + config.endpoint + full_path,
                                   prompt_for_error);
        } else {
            last_error = "transport failure: " + httplib::to_string(result.error());
        }
        if (attempt < config.max_retries)
            sleeper(std::chrono::milliseconds(1000LL << attempt));
    }
    throw BackendError(last_error + " after " + std::to_string(config.max_retries + 1) +
                           " attempt(s) to " + config.endpoint + full_path,
                       prompt_for_error);
}

}  // namespace folio::net
