#pragma once

#include <stdexcept>
#include <string>

namespace zofo {

// Dimension mismatches and malformed configuration files.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally invalid plant (e.g. singular I - A).
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Objective whose normal matrix is singular; no unique minimizer.
class DegenerateObjectiveError : public std::runtime_error {
public:
    explicit DegenerateObjectiveError(const std::string& what) : std::runtime_error(what) {}
};

// Comparing gradient estimates that do not share the same perturbation.
class InvalidComparisonError : public std::runtime_error {
public:
    explicit InvalidComparisonError(const std::string& what) : std::runtime_error(what) {}
};

// A closed-loop run whose plant-step budget cannot fit a single update.
class EmptySeriesError : public std::runtime_error {
public:
    explicit EmptySeriesError(const std::string& what) : std::runtime_error(what) {}
};

// File I/O failures, annotated with the offending path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace zofo
