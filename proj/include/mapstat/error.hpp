#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mapstat {

// Base class for every error raised by the library. Callers that only care
// about "something was wrong with the input" can catch this one.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyMapping : public Error {
public:
    EmptyMapping() : Error("mapping is empty") {}
};

// An image outside [1, n]. `index` is the 1-indexed position of the entry.
class OutOfRange : public Error {
public:
    explicit OutOfRange(std::size_t index)
        : Error("image at position " + std::to_string(index) + " is outside [1, n]"),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class InvalidSize : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class DegenerateCondition : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class TruncationTooShort : public Error {
public:
    using Error::Error;
};

class SingularFit : public Error {
public:
    using Error::Error;
};

} // namespace mapstat
