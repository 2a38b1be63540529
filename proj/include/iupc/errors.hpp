#pragma once

#include <stdexcept>
#include <string>

namespace iupc {

// Base class for all library errors. `kind()` is stable and machine-readable;
// what() carries the human-readable message naming the offending element.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Malformed input document. Carries a 1-based position when known.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, int line = 0, int column = 0)
        : Error("SyntaxError", message), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

class ModelError : public Error {
public:
    explicit ModelError(const std::string& message) : Error("ModelError", message) {}
};

// COMPLETE event without a matching START (or other event-order breach) in a trace document.
class OrderError : public Error {
public:
    explicit OrderError(const std::string& message) : Error("OrderError", message) {}
};

// A constraint references a pattern variable that is not bound by its structural pattern.
class BindError : public Error {
public:
    explicit BindError(const std::string& message) : Error("BindError", message) {}
};

class PathExplosion : public Error {
public:
    explicit PathExplosion(const std::string& message) : Error("PathExplosion", message) {}
};

// Anchor label absent from the schema being checked; signals stale identification.
class PatternUnmatched : public Error {
public:
    explicit PatternUnmatched(const std::string& message) : Error("PatternUnmatched", message) {}
};

// Data-coverage analysis precondition not met; callers fall back to the
// conservative design-time verdict.
class NotIntervalDecidable : public Error {
public:
    explicit NotIntervalDecidable(const std::string& message)
        : Error("NotIntervalDecidable", message) {}
};

class StaleIdentification : public Error {
public:
    explicit StaleIdentification(const std::string& message)
        : Error("StaleIdentification", message) {}
};

class VersionConflict : public Error {
public:
    explicit VersionConflict(const std::string& message) : Error("VersionConflict", message) {}
};

class OutOfOrderEvent : public Error {
public:
    explicit OutOfOrderEvent(const std::string& message) : Error("OutOfOrderEvent", message) {}
};

}  // namespace iupc
