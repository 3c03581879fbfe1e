#pragma once

#include <stdexcept>
#include <string>

namespace treedet {

// Malformed input text (Timbuk / product format / terms).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int col)
        : std::runtime_error(std::move(msg) + " at line " + std::to_string(line) +
                             ", column " + std::to_string(col)),
          line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

// Well-formed request that violates an operation contract (unknown state,
// signature mismatch, name clash, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured cap (state count, transition count, tuple count) or a
// deadline was hit. Distinguishable from wrong answers and input errors.
class ResourceLimitError : public std::runtime_error {
public:
    ResourceLimitError(const std::string& msg, bool timed_out)
        : std::runtime_error(msg), timed_out_(timed_out) {}

    bool timed_out() const { return timed_out_; }

private:
    bool timed_out_;
};

}  // namespace treedet
