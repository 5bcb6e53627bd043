#pragma once

#include <stdexcept>
#include <string>

namespace piezosv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A modulus combination that appears as a divisor (or as the
/// nondegeneracy bracket) is zero relative to the size of its terms.
class DegenerateMaterial : public Error {
public:
    DegenerateMaterial(std::string which, double value)
        : Error("degenerate material: " + which + " = " + std::to_string(value)),
          which_(std::move(which)), value_(value) {}
    const std::string& which() const noexcept { return which_; }
    double value() const noexcept { return value_; }

private:
    std::string which_;
    double value_;
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

class QuadratureOrderUnavailable : public Error {
public:
    using Error::Error;
};

class NotBoundaryNode : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class InvalidBoundaryData : public Error {
public:
    using Error::Error;
};

class SolveFailure : public Error {
public:
    SolveFailure(const std::string& what, double residual)
        : Error(what + " (relative residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Neumann data violate the solvability condition  int rhs = oint flux.
class IncompatibleData : public Error {
public:
    explicit IncompatibleData(double defect)
        : Error("incompatible Neumann data: defect " + std::to_string(defect)), defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

class NotHarmonic : public Error {
public:
    explicit NotHarmonic(double residual)
        : Error("field is not discrete-harmonic: max |lap f| = " + std::to_string(residual)),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class IntegrabilityFailure : public Error {
public:
    explicit IntegrabilityFailure(double mismatch)
        : Error("in-plane gradient is not integrable: path mismatch " + std::to_string(mismatch)),
          mismatch_(mismatch) {}
    double mismatch() const noexcept { return mismatch_; }

private:
    double mismatch_;
};

class InsufficientGrids : public Error {
public:
    using Error::Error;
};

}  // namespace piezosv
