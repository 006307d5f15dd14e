#pragma once

#include <stdexcept>
#include <string>

namespace mlrh {

// Typed failures so callers can tell "you asked outside the supported set"
// apart from "the numerics gave up". All derive from std::runtime_error.

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Asymptotic expansion requested outside its validity sector.
struct SectorError : std::runtime_error {
  explicit SectorError(const std::string& what) : std::runtime_error(what) {}
};

// Requested tolerance unreachable with the requested truncation order.
struct AccuracyError : std::runtime_error {
  explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

// Root pair collapsed (A ~ 0): downstream expansions are undefined.
struct DegenerateError : std::runtime_error {
  explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

// Linear system for the rational approximant is numerically singular.
struct SingularSystemError : std::runtime_error {
  explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

// Rational approximant evaluated on top of a denominator zero.
struct PoleError : std::runtime_error {
  explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

// Time-stepping solution left the stable region (|h| beyond any sane scale).
struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature failed to meet tolerance within its truncation window.
struct IntegrationError : std::runtime_error {
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

// Implied-vol target price is outside the attainable band.
struct NoSolutionError : std::runtime_error {
  explicit NoSolutionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mlrh
