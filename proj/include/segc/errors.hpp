#pragma once

#include <stdexcept>
#include <string>

namespace segc {

// Input/structure problems: bad files, violated graph invariants, bad configs.
// The CLI maps these to exit code 1; everything else to 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public ValidationError {
public:
    explicit ParseError(const std::string& msg) : ValidationError(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace segc
