#pragma once

#include <stdexcept>
#include <string>

namespace expou {

/// A parameter or configuration value violates a model invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Path data handed to a path functional does not line up with its grid.
class PathDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A volatility state outside (0, inf) reached a formula that takes ln y.
class InvalidVolatilityState : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Too few paths for the requested estimator (control-variate pilot).
class InsufficientPaths : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace expou
