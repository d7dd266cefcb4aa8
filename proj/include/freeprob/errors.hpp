#pragma once

#include <stdexcept>
#include <string>

namespace freeprob {

/// A request exceeded a configured size guard. The message names the cap.
class SizeGuardError : public std::runtime_error {
public:
    explicit SizeGuardError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structural misuse: mismatched ground sizes, malformed partitions,
/// invalid arguments.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A truncated cumulant table was queried beyond its maximum order.
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The Gram matrix at the requested size is not invertible.
class GramSingularError : public std::runtime_error {
public:
    GramSingularError(int n, int k)
        : std::runtime_error("gram-singular(" + std::to_string(n) + "," +
                             std::to_string(k) + ")"),
          n(n), k(k) {}
    int n;
    int k;
};

/// Two independent evaluation routes disagreed. Always a bug, never a warning.
class InconsistencyError : public std::logic_error {
public:
    explicit InconsistencyError(const std::string& msg) : std::logic_error(msg) {}
};

/// A certified comparison stayed undecided at maximum precision.
class UndecidableError : public std::runtime_error {
public:
    explicit UndecidableError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace freeprob
