#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace vise {

/// A parameter record failed validation. `field()` names the offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The voting rule makes the requested quantity meaningless, e.g. the group's
/// vote never changes the outcome so no claims threshold can be optimal.
class DegenerateModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reading or writing an artifact failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vise
