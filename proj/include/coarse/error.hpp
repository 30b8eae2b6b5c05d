#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    Config,         // bad parameters or violated preconditions (exit 2)
    InvalidInput,   // graph / metric / cover / complex fails validation (exit 3)
    Parse,          // malformed JSON or config text (exit 4)
    Approximation,  // simplicial approximation could not be built (exit 5)
    Assertion       // a checked inequality was violated at runtime (exit 6)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::InvalidInput: return 3;
        case ErrorKind::Parse: return 4;
        case ErrorKind::Approximation: return 5;
        case ErrorKind::Assertion: return 6;
    }
    return 1;
}

}  // namespace coarse
