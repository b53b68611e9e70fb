#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hlsguide {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A descriptor file does not follow the schema (missing/unknown/mistyped field).
class SchemaError : public Error {
public:
    SchemaError(std::string field, std::string constraint)
        : Error(field + ": " + constraint), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// One or more type invariants failed. what() lists every failure, one per line.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> failures);

    const std::vector<std::string>& failures() const { return failures_; }

private:
    std::vector<std::string> failures_;
};

// An operation was called outside its precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

// A transform cannot be applied to this kernel at all.
class InapplicableError : public Error {
public:
    explicit InapplicableError(const std::string& reason)
        : Error("inapplicable: " + reason), reason_(reason) {}

    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

// A design exceeds a platform budget. budget() names the binding one.
class ResourceError : public Error {
public:
    ResourceError(std::string budget, const std::string& detail)
        : Error("resource budget exceeded (" + budget + "): " + detail),
          budget_(std::move(budget)) {}

    const std::string& budget() const { return budget_; }

private:
    std::string budget_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hlsguide
