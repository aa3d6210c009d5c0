#pragma once

#include <stdexcept>
#include <string>

namespace opsumm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file; line is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t line = 0)
        : Error(line ? message + " (line " + std::to_string(line) + ")" : message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

// Transport or service failure from a generation/embedding backend.
class BackendError : public Error {
public:
    BackendError(std::string message, int status = 0, bool retryable = false)
        : Error(std::move(message)), status_(status), retryable_(retryable) {}
    int status() const { return status_; }
    bool retryable() const { return retryable_; }

private:
    int status_;
    bool retryable_;
};

// Persisted pipeline state no longer matches the corpus prefix.
class ChecksumError : public Error {
public:
    using Error::Error;
};

// Judge response without a parseable score; carries the raw completion.
class JudgeParseError : public Error {
public:
    JudgeParseError(std::string message, std::string raw_response)
        : Error(std::move(message)), raw_response_(std::move(raw_response)) {}
    const std::string& raw_response() const { return raw_response_; }

private:
    std::string raw_response_;
};

}  // namespace opsumm
