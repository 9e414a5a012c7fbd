#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nanodesign {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad bounds, length mismatch, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A query fell outside the domain of a tabulated quantity.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The scattering recursion produced a non-finite intermediate.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::size_t layer, int order)
        : Error(what), layer_(layer), order_(order) {}

    std::size_t layer() const noexcept { return layer_; }
    int order() const noexcept { return order_; }

private:
    std::size_t layer_;
    int order_;
};

/// Non-finite value encountered in network evaluation or optimisation.
class NumericError : public Error {
public:
    using Error::Error;
};

class NormalizationError : public Error {
public:
    using Error::Error;
};

/// Raised by train() when the loss stops being finite.
class TrainingError : public Error {
public:
    TrainingError(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

/// Failure while reading a persisted dataset or model.
class FormatError : public Error {
public:
    enum class Kind { Io, Version, Header, Length, Checksum };

    FormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace nanodesign
