#ifndef GRAPHLOG_ERRORS_HPP
#define GRAPHLOG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphlog {

// Root of the library's error hierarchy. Every throw site names the offending
// vertex, edge, field, or parameter in the message.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class UnknownVertex : public Error {
public:
    using Error::Error;
};

class InvalidP : public Error {
public:
    using Error::Error;
};

// Dirichlet data must vanish where the contract says it vanishes.
class BoundaryViolation : public Error {
public:
    using Error::Error;
};

class NonFiniteValue : public Error {
public:
    using Error::Error;
};

class ZeroPair : public Error {
public:
    using Error::Error;
};

// No vertex carries both components: the ray misses the constraint manifold.
class CouplingDegenerate : public Error {
public:
    using Error::Error;
};

// The closed-form projection exponent would overflow exp().
class RayOverflow : public Error {
public:
    using Error::Error;
};

class EmptyCandidates : public Error {
public:
    using Error::Error;
};

class EmptyIntersection : public Error {
public:
    using Error::Error;
};

class EpsilonTooLarge : public Error {
public:
    using Error::Error;
};

class DeltaTooLarge : public Error {
public:
    using Error::Error;
};

class PotentialNotPositive : public Error {
public:
    using Error::Error;
};

// Raised by h_norm when a negative potential is found and the caller gave no
// out-parameter to receive the warning: reported, never silently accepted.
class NegativePotentialWarning : public Error {
public:
    using Error::Error;
};

} // namespace graphlog

#endif
