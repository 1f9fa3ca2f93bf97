#ifndef DIAGFORGE_ERRORS_HPP
#define DIAGFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace diagforge {

// Invalid or inconsistent caller data (maps to CLI exit 3).
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

struct NotNormal : InvalidInput {
  explicit NotNormal(const std::string& what) : InvalidInput(what) {}
};

struct DimensionMismatch : InvalidInput {
  explicit DimensionMismatch(const std::string& what) : InvalidInput(what) {}
};

struct DegenerateHull : InvalidInput {
  explicit DegenerateHull(const std::string& what) : InvalidInput(what) {}
};

struct InfeasibleInput : InvalidInput {
  explicit InfeasibleInput(const std::string& what) : InvalidInput(what) {}
};

// Requested accuracy cannot be met by the construction (CLI exit 4).
struct ToleranceUnreachable : std::runtime_error {
  explicit ToleranceUnreachable(const std::string& what)
      : std::runtime_error(what) {}
};

// No matrix model within the dimension cap meets the request (CLI exit 4).
struct ModelTooCoarse : std::runtime_error {
  explicit ModelTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

// Target diagonal escapes the convex hull of the spectrum (CLI exit 2; a
// certified negative answer, not an operational failure).
struct NecessityViolated : std::runtime_error {
  double violating_re;
  double violating_im;
  double distance;
  NecessityViolated(const std::string& what, double re, double im, double dist)
      : std::runtime_error(what),
        violating_re(re),
        violating_im(im),
        distance(dist) {}
};

}  // namespace diagforge

#endif
