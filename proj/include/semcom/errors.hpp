#pragma once

#include <stdexcept>

namespace semcom {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid model, link, scenario or CLI configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unknown vertex, label or experiment name.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A feature cannot be represented on the wire (NaN or infinity).
class EncodingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative search ran out of range, e.g. no blocklength below the cap.
class SaturationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Feature-unit and quantized-unit quantities mixed in one call.
class UnitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace semcom
