#pragma once

#include <stdexcept>
#include <string>

namespace focalkit {

// Invalid arguments: mismatched shapes, out-of-range radii, points off
// their model, and so on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The octonionic line representative has no real coordinate.
class ChartError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Rank-deficient differential or a chart whose rank disagrees with the
// declared dimension.
class ImmersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geodesic integration left the chart or hit a degenerate point.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The ambient model does not support the requested quantity.
class UnsupportedAmbientError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace focalkit
