#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opmeasure {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating input: non-Hermitian values, dimension
/// mismatches, violated preconditions.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A randomized search hit its retry cap.
class SearchExhausted : public Error {
public:
    SearchExhausted(const std::string& what, std::size_t tries)
        : Error(what), tries_(tries) {}

    std::size_t tries() const noexcept { return tries_; }

private:
    std::size_t tries_;
};

} // namespace opmeasure
