#pragma once

#include <stdexcept>
#include <string>

namespace famicom {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

/// Transport failure after the retry budget is exhausted.
class BackendUnavailable : public Error {
public:
    using Error::Error;
};

/// The backend cannot return per-token logprobs (no echo-and-score support).
class ScoringUnsupported : public Error {
public:
    using Error::Error;
};

class TooFewTokens : public Error {
public:
    using Error::Error;
};

class NoCountFound : public Error {
public:
    using Error::Error;
};

class ComplexityUnparseable : public Error {
public:
    using Error::Error;
};

class EmptyProgram : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& what)
        : Error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PoolTooSmall : public Error {
public:
    using Error::Error;
};

class TooFewOptions : public Error {
public:
    using Error::Error;
};

class InsufficientPool : public Error {
public:
    using Error::Error;
};

class FileNotFound : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class DegenerateInput : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace famicom
