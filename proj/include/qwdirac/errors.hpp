#pragma once

#include <stdexcept>
#include <string>

namespace qwd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters violate a documented precondition (q outside (0,1), omega <= 0, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

class FixedPointDerivativeUnavailable : public Error {
public:
    using Error::Error;
};

class SeriesDivergence : public Error {
public:
    using Error::Error;
};

/// The evaluated series lost every trustworthy digit to cancellation or overflowed.
class PrecisionLoss : public Error {
public:
    using Error::Error;
};

class ZeroNotBracketed : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Requested eigenvalue index lies beyond the 64-bit growth budget.
class PrecisionBudgetExceeded : public Error {
public:
    using Error::Error;
};

class MissedRootSuspected : public Error {
public:
    using Error::Error;
};

class DerivativeStepUnstable : public Error {
public:
    using Error::Error;
};

}  // namespace qwd
