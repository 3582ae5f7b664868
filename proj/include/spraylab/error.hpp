#pragma once

#include <stdexcept>
#include <string>

namespace spraylab {

/// Malformed input text (settings, maps, reports, model files).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
    ParseError(const std::string& context, int line, const std::string& what)
        : std::runtime_error(context + ":" + std::to_string(line) + ": " + what) {}
};

/// Well-formed input that violates a documented constraint.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace spraylab
