#pragma once

#include <stdexcept>
#include <string>

namespace airsig {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of a model equation (σ² ≤ 0, D ≤ 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input data cannot support the requested operation (too short, degenerate, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// Malformed file or configuration text.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace airsig
