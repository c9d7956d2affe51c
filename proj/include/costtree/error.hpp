#pragma once

#include <stdexcept>
#include <string>

namespace costtree {

// Malformed or inconsistent input data (files, schemas, cost models).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A requested feature that this library deliberately does not support.
class UnsupportedFeature : public std::runtime_error {
public:
    explicit UnsupportedFeature(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace costtree
