// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace compacta {

/// A verified search ran out of its iteration budget.  Under the stated
/// preconditions the searched object exists, so exhaustion signals that a
/// precondition was violated (or the budget is too small).
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A refinement step produced a compact that refutes the distance bound it
/// must satisfy.  Signals an unsound image oracle.
struct ClassViolation : std::runtime_error {
    explicit ClassViolation(const std::string& what) : std::runtime_error(what) {}
};

/// ball_split chose the inhabited branch but filtering emptied the candidate
/// list at some stage.  Callers retry with Miss semantics or a larger radius.
struct EmptyPiece : std::runtime_error {
    explicit EmptyPiece(const std::string& what) : std::runtime_error(what) {}
};

struct SpaceMismatch : std::invalid_argument {
    explicit SpaceMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace compacta
