// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "folio/core/error.hpp"
#include "folio/core/json.hpp"
#include "folio/prep/image.hpp"

namespace folio::net {

struct BackendConfig {
    enum class Kind { Http, Fixture };
    enum class Mode { Specialised, General };

    Kind kind = Kind::Http;
    Mode mode = Mode::General;
    std::string endpoint;     // scheme://host[:port][/base-path]
    std::string model;
    std::string auth_env;     // environment variable holding the bearer token
    double timeout_seconds = 60.0;
    int max_retries = 3;
    bool verify_tls = true;   // disable only for self-signed internal endpoints
    std::string fixture_dir;  // Kind::Fixture: directory of <key>.txt files

    void check() const {
        if (timeout_seconds <= 0.0) throw ConfigError("backend timeout must be positive");
        if (max_retries < 0) throw ConfigError("backend max_retries must be >= 0");
        if (kind == Kind::Http && endpoint.empty())
            throw ConfigError("http backend needs an endpoint");
    }

    static BackendConfig from_json(const json& node);
    json to_json() const;
};

struct RawModelOutput {
    std::string text;
    long long latency_ms = 0;
    std::string backend_id;
};

struct ChatRequest {
    std::string prompt;
    const prep::RasterImage* image = nullptr;  // optional page image
    std::string fixture_key;                   // fixture lookup key
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    // Must be safe to call from multiple threads at once.
    virtual RawModelOutput complete(const ChatRequest& request) = 0;
};

// Deterministic offline backend: canned responses keyed by fixture_key,
// either registered in memory or read from <key>.txt under a directory.
// Unknown keys are a BackendError.
class FixtureChatBackend : public ChatBackend {
public:
    FixtureChatBackend() = default;
    explicit FixtureChatBackend(std::string directory) : directory_(std::move(directory)) {}

    void add_response(const std::string& key, std::string text) {
        canned_[key] = std::move(text);
    }

    RawModelOutput complete(const ChatRequest& request) override;

private:
    std::map<std::string, std::string> canned_;
    std::string directory_;
};

// Sleep hook so tests can assert the retry schedule without waiting.
using Sleeper = std::function<void(std::chrono::milliseconds)>;

// One chat-completion call per request over the OpenAI-compatible wire
// format, page image embedded as base64 PNG. Transient failures (transport,
// 408/429/5xx) retry with exponential backoff: 1s, 2s, 4s, ...
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(BackendConfig config, Sleeper sleeper = {});

    RawModelOutput complete(const ChatRequest& request) override;

private:
    BackendConfig config_;
    Sleeper sleeper_;
};

std::unique_ptr<ChatBackend> make_chat_backend(const BackendConfig& config,
                                               Sleeper sleeper = {});

}  // namespace folio::net
