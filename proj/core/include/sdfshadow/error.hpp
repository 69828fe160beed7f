#pragma once

#include <stdexcept>
#include <string>

namespace sdfshadow {

/// Failure categories. The CLI maps each one onto a process exit code.
enum class ErrorKind {
    usage = 2,
    config = 3,
    io = 4,
    invariant = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Malformed on-disk data: mesh text, field headers, images.
class FormatError : public IoError {
public:
    explicit FormatError(const std::string& what) : IoError(what) {}
};

/// A mesh record that failed to parse; carries its 1-based line number.
class ParseError : public FormatError {
public:
    ParseError(std::size_t line, const std::string& what)
        : FormatError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyMeshError : public FormatError {
public:
    explicit EmptyMeshError(const std::string& what) : FormatError(what) {}
};

class UnsupportedVersionError : public FormatError {
public:
    UnsupportedVersionError(unsigned found, unsigned supported)
        : FormatError("unsupported field file version " + std::to_string(found) + " (supported: " +
                      std::to_string(supported) + ")"),
          found_(found) {}
    unsigned found() const noexcept { return found_; }

private:
    unsigned found_;
};

class InvariantError : public Error {
public:
    explicit InvariantError(const std::string& what) : Error(ErrorKind::invariant, what) {}
};

}  // namespace sdfshadow
