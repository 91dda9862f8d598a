#ifndef STABCERT_ERRORS_HPP
#define STABCERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stabcert {

struct NonFiniteError : std::runtime_error {
    explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

struct NotSymmetricError : std::invalid_argument {
    explicit NotSymmetricError(const std::string& what) : std::invalid_argument(what) {}
};

struct NotPositiveDefiniteError : std::invalid_argument {
    explicit NotPositiveDefiniteError(const std::string& what) : std::invalid_argument(what) {}
};

struct GridTooLargeError : std::runtime_error {
    GridTooLargeError(const std::string& what, std::size_t requested, std::size_t cap)
        : std::runtime_error(what), requested(requested), cap(cap) {}
    std::size_t requested;
    std::size_t cap;
};

struct NoDecayError : std::runtime_error {
    explicit NoDecayError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownModelError : std::invalid_argument {
    explicit UnknownModelError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace stabcert

#endif
