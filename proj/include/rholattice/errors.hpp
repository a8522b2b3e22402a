#pragma once

#include <stdexcept>
#include <string>

namespace rholattice {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModulusMismatch : public Error {
public:
    using Error::Error;
};

class UnsupportedModulus : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NOdd : public Error {
public:
    NOdd() : Error("evaluation at chi = -1 is undefined for odd N") {}
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

class WorkCapExceeded : public Error {
public:
    WorkCapExceeded(unsigned long long needed, unsigned long long cap)
        : Error("brute-force candidate count " + std::to_string(needed) +
                " exceeds cap " + std::to_string(cap)),
          needed_(needed), cap_(cap) {}
    unsigned long long needed() const { return needed_; }
    unsigned long long cap() const { return cap_; }

private:
    unsigned long long needed_;
    unsigned long long cap_;
};

// A search that a proven statement says must succeed came back empty.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

}  // namespace rholattice
