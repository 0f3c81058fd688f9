#pragma once

#include <stdexcept>
#include <string>

namespace qes {

// Base for every failure raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative root finder did not reach its residual target.
class non_convergence : public error {
public:
    using error::error;
};

// Dense eigensolver reported failure.
class eigensolver_failure : public error {
public:
    using error::error;
};

// Operation needs zeta != 0 (e.g. t = +-z/(2 i zeta) substitution).
class zeta_zero : public error {
public:
    using error::error;
};

// Supplied energy is not a root of R_M.
class not_an_eigenvalue : public error {
public:
    using error::error;
};

// Operation only defined for one of the two variants.
class variant_mismatch : public error {
public:
    using error::error;
};

// Closed forms exist for M = 1..4 only.
class unsupported_m : public error {
public:
    using error::error;
};

// Argument outside the domain of a map (z = 0 for the gauge factor).
class domain_error : public error {
public:
    using error::error;
};

}  // namespace qes
