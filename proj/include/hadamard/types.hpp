#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hadamard {

// Arguments outside an operation's documented domain. The CLI maps this to
// exit code 2.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine stopped before reaching its tolerance. Carries the
// last bracket so callers can see how far the search got.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, double lo, double hi)
      : std::runtime_error(what + " [last bracket " + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]"),
        bracket_lo(lo),
        bracket_hi(hi) {}

  double bracket_lo;
  double bracket_hi;
};

enum class Kind { Euclidean, Spike, Book, HalfPlane };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Euclidean: return "euclidean";
    case Kind::Spike: return "spike";
    case Kind::Book: return "book";
    case Kind::HalfPlane: return "halfplane";
  }
  return "unknown";
}

struct EuclideanParams {
  int dim = 2;
};

// Branch n is an interval of length n, glued to all other branches at 0.
struct SpikeParams {
  int branches = 1;
};

// Pages are isosceles right triangles with legs of length `leg`, glued along
// the spine edge (v = 0).
struct BookParams {
  int pages = 1;
  double leg = 1.0;
};

struct HalfPlaneParams {};

struct SpaceHandle {
  Kind kind = Kind::Euclidean;
  std::variant<EuclideanParams, SpikeParams, BookParams, HalfPlaneParams>
      params{EuclideanParams{}};

  const EuclideanParams& euclidean() const {
    return std::get<EuclideanParams>(params);
  }
  const SpikeParams& spike() const { return std::get<SpikeParams>(params); }
  const BookParams& book() const { return std::get<BookParams>(params); }
};

// Coordinates per space kind. Gluing identifications are normalized at
// construction time: a spike point with s == 0 lands on branch 1, a book
// point with v == 0 on page 1. Point equality elsewhere is metric
// (distance <= tol_point), never structural.
struct EuclideanPt {
  std::vector<double> x;
};

struct SpikePt {
  int branch;
  double s;  // position in [0, branch]
};

struct BookPt {
  int page;
  double u;  // along the spine from the corner A
  double v;  // perpendicular distance into the page; u + v <= leg
};

struct HalfPlanePt {
  double x;
  double y;  // y > 0
};

using Point = std::variant<EuclideanPt, SpikePt, BookPt, HalfPlanePt>;

inline Point euclidean_pt(std::vector<double> coords) {
  if (coords.empty())
    throw input_error("euclidean point needs at least one coordinate");
  for (double c : coords)
    if (!std::isfinite(c))
      throw input_error("euclidean coordinates must be finite");
  return EuclideanPt{std::move(coords)};
}

inline Point spike_pt(int branch, double s) {
  if (branch < 1) throw input_error("spike branch index must be >= 1");
  if (!std::isfinite(s) || s < 0.0)
    throw input_error("spike coordinate must be finite and >= 0");
  if (s == 0.0) branch = 1;
  return SpikePt{branch, s};
}

inline Point book_pt(int page, double u, double v) {
  if (page < 1) throw input_error("book page index must be >= 1");
  if (!std::isfinite(u) || !std::isfinite(v) || u < 0.0 || v < 0.0)
    throw input_error("book coordinates must be finite and >= 0");
  if (v == 0.0) page = 1;
  return BookPt{page, u, v};
}

inline Point halfplane_pt(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y) || y <= 0.0)
    throw input_error("halfplane point needs finite x and y > 0");
  return HalfPlanePt{x, y};
}

struct ToleranceConfig {
  double tol_point = 1e-9;  // metric threshold for point equality
  double tol_opt = 1e-12;   // target bracket width of 1D minimizations
  int max_iter = 200;

  void validate() const {
    if (!(tol_point > 0.0) || !(tol_opt > 0.0))
      throw input_error("tolerances must be positive");
    if (tol_opt > tol_point)
      throw input_error("tol_opt must not exceed tol_point");
    if (max_iter < 1) throw input_error("max_iter must be >= 1");
  }
};

}  // namespace hadamard
