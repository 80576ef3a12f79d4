#pragma once

#include <stdexcept>
#include <string>

namespace gala {

/// Base for every error the library raises. The CLI maps any of these to a
/// nonzero exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape or length mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input for which the quantity is undefined (zero norm, empty class, ...).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of the operation (log of a
/// non-positive value, probabilities that do not sum to one).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value or combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    DivergenceError(std::size_t epoch, std::size_t batch, double loss)
        : Error("training diverged at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch) +
                " (loss = " + std::to_string(loss) + ")"),
          epoch_(epoch),
          batch_(batch) {}

    std::size_t epoch() const noexcept { return epoch_; }
    std::size_t batch() const noexcept { return batch_; }

private:
    std::size_t epoch_;
    std::size_t batch_;
};

}  // namespace gala
