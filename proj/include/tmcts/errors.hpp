#pragma once

#include <stdexcept>
#include <string>

namespace tmcts {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Structural problem in a tree: unlabeled internal node, two roots, orphan
// node, duplicate child listing, broken leaf index.
class MalformedTree : public Error {
public:
    explicit MalformedTree(const std::string& msg) : Error("malformed tree: " + msg) {}
};

// Input text could not be parsed; the message carries the position when the
// underlying parser provides one.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

// Argument outside the reward family's admissible set.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error("domain error: " + msg) {}
};

// Instance violates a standing assumption (root value at the threshold,
// zero difficulty, non-unique argmax in a generated instance).
class AssumptionViolated : public Error {
public:
    explicit AssumptionViolated(const std::string& msg) : Error("assumption violated: " + msg) {}
};

// File could not be read or written; the message names the path.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("io error: " + msg) {}
};

}  // namespace tmcts
