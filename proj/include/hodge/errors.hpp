#pragma once

#include <stdexcept>
#include <string>

namespace hodge {

// Every failure raised by the library derives from hodge::error. The kind()
// string names the failure class so that reports and the CLI can print it
// without RTTI tricks.
class error : public std::runtime_error {
public:
    error(std::string kind, const std::string &what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Malformed input: wrong shapes, non-nested filtrations, bad exponents.
class validation_error : public error {
public:
    explicit validation_error(const std::string &what) : error("ValidationError", what) {}
};

// A pivot that is not a unit of the scalar ring was needed.
class non_unit_pivot : public error {
public:
    explicit non_unit_pivot(const std::string &what) : error("NonUnitPivot", what) {}
};

// Mathematical failure of an operation with a named kind such as NotPure,
// NotFlat, DoesNotExist. The detail string carries the certificate.
class check_failure : public error {
public:
    check_failure(const std::string &kind, const std::string &what) : error(kind, what) {}
};

// Malformed text input. The message names the offset and the expected token.
class parse_error : public error {
public:
    parse_error(std::size_t position, const std::string &expected, const std::string &context = {})
        : error("ParseError", (context.empty() ? std::string() : context + ": ") + "at position " +
                                  std::to_string(position) + ": expected " + expected),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

inline void require(bool cond, const std::string &what) {
    if (!cond) {
        throw validation_error(what);
    }
}

} // namespace hodge
