#pragma once

#include <stdexcept>
#include <string>

namespace cpg {

// Malformed system description. Carries the source position for diagnostics.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Structurally invalid model (unreachable node, undeclared semaphore, ...).
class ValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// State-space exploration hit the configured node cap.
class ResourceLimitError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class UnknownLabelError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cpg
