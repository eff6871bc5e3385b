#pragma once

#include <stdexcept>
#include <string>

namespace acc {

/// Malformed or inconsistent user input (files, flags, ids). Maps to CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model backend misbehaved: bad line, id mismatch, timeout, closed transport.
/// Maps to CLI exit code 3.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace acc
