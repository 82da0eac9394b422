#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bcw {

/// Base for every error that a user of the workbench can provoke with bad
/// input. The CLI maps these to exit status 2.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Domain error tagged with a module-specific code enum. Each module provides
/// `std::string_view to_string(Code)`.
template <class Code>
class CodedError : public DomainError {
public:
    CodedError(Code code, const std::string& message)
        : DomainError(std::string(to_string(code)), message), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

/// Thrown when decoding malformed or non-canonical serialized data.
class DecodeError : public DomainError {
public:
    explicit DecodeError(const std::string& message) : DomainError("DecodeError", message) {}
};

} // namespace bcw
