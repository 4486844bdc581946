#pragma once

#include <stdexcept>
#include <string>

namespace hglass {

// Key or index outside the range allowed by the model parameters.
class RangeError : public std::out_of_range {
public:
    RangeError(const std::string& field, const std::string& detail)
        : std::out_of_range("range error in '" + field + "': " + detail), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Spin configuration length does not match the model size.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parameter outside the domain of an analytic expression (e.g. sigma <= 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Enumeration or memory budget exceeded.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A check that should hold by construction failed (energy drift, missing root bracket).
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hglass
