// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace folio {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or missing configuration (files, keys, parameter ranges).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Filesystem and image decode/encode failures.
class IoError : public Error {
public:
    using Error::Error;
};

// Inference backend failures: transport, non-success status, missing fixture.
// Keeps the request prompt so a failed call can be inspected afterwards.
class BackendError : public Error {
public:
    explicit BackendError(const std::string& message, std::string prompt = {})
        : Error(message), prompt_(std::move(prompt)) {}

    const std::string& prompt() const { return prompt_; }

private:
    std::string prompt_;
};

// Model output that cannot be parsed into the expected structure.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace folio
