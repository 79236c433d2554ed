#pragma once

#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "projection.hpp"

namespace hadamard {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen);
  }
  int uniform_int(int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(gen);
  }
};

// Stream for draw `index` of experiment `seed`. Draws depend only on the
// pair, never on scheduling, so threaded runs reproduce byte-identical
// output.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(detail::splitmix64(seed ^ detail::splitmix64(index + 0x51ed2701ULL)));
}

// Runs fn(0) .. fn(n-1) on up to `threads` workers. Callers write results
// into index-addressed slots; the strided schedule is irrelevant to output.
template <typename F>
inline void for_each_index(std::size_t n, int threads, F&& fn) {
  if (threads < 1) throw input_error("thread count must be >= 1");
  const std::size_t nt =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += nt) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Index in [1, n], log-uniform so small indices dominate but deep branches
// and pages still get visited. Counterexample search uses this.
inline int log_uniform_index(Rng& rng, int n) {
  if (n <= 1) return 1;
  const double e = std::exp(rng.uniform(0.0, std::log(n + 1.0)));
  return std::clamp(static_cast<int>(e), 1, n);
}

// Coordinate windows for random draws. Uniform in the listed coordinates of
// each space's standard chart; every experiment that samples documents this
// convention.
struct SampleWindow {
  double box = 3.0;        // euclidean coordinates in [-box, box]
  double hp_x = 3.0;       // halfplane x in [-hp_x, hp_x]
  double hp_ymin = 0.2;
  double hp_ymax = 5.0;
  bool log_indices = false;  // branch/page indices log-uniform instead of uniform
};

inline Point sample_point(const SpaceHandle& s, Rng& rng,
                          const SampleWindow& w = {}) {
  switch (s.kind) {
    case Kind::Euclidean: {
      std::vector<double> x(s.euclidean().dim);
      for (auto& c : x) c = rng.uniform(-w.box, w.box);
      return EuclideanPt{std::move(x)};
    }
    case Kind::Spike: {
      const int N = s.spike().branches;
      const int n = w.log_indices ? log_uniform_index(rng, N)
                                  : rng.uniform_int(1, N);
      return spike_pt(n, rng.uniform(0.0, static_cast<double>(n)));
    }
    case Kind::Book: {
      const auto& bp = s.book();
      const int pg = w.log_indices ? log_uniform_index(rng, bp.pages)
                                   : rng.uniform_int(1, bp.pages);
      double u = rng.uniform(0.0, bp.leg);
      double v = rng.uniform(0.0, bp.leg);
      if (u + v > bp.leg) {  // reflect into the triangle, keeps uniformity
        const double u2 = bp.leg - v;
        v = bp.leg - u;
        u = u2;
      }
      return book_pt(pg, u, v);
    }
    case Kind::HalfPlane:
      return halfplane_pt(rng.uniform(-w.hp_x, w.hp_x),
                          rng.uniform(w.hp_ymin, w.hp_ymax));
  }
  throw input_error("unknown space kind");
}

// Uniform draw from the closed ball around `center`. Spike balls are exact
// segment unions, halfplane balls are exact euclidean disks in the chart
// (so the draw is uniform in chart coordinates), euclidean and book use
// box rejection.
inline Point sample_in_ball(const SpaceHandle& s, const Point& center,
                            double radius, Rng& rng) {
  if (!(radius > 0.0)) throw input_error("ball radius must be positive");
  validate_point(s, center);
  switch (s.kind) {
    case Kind::Euclidean: {
      const auto& c = std::get<EuclideanPt>(center);
      const int dim = s.euclidean().dim;
      for (int tries = 0; tries < 100000; ++tries) {
        std::vector<double> x(dim);
        double n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
          const double d = rng.uniform(-radius, radius);
          x[i] = c.x[i] + d;
          n2 += d * d;
        }
        if (n2 <= radius * radius) return EuclideanPt{std::move(x)};
      }
      throw numerical_error("ball rejection sampling failed to accept", 0.0,
                            radius);
    }
    case Kind::Spike: {
      const auto& c = std::get<SpikePt>(center);
      const int N = s.spike().branches;
      // The ball is a union of disjoint branch segments; pick by length.
      struct Seg {
        int br;
        double a, b;
      };
      std::vector<Seg> segs;
      double total = 0.0;
      const double own_a = std::max(0.0, c.s - radius);
      const double own_b = std::min(static_cast<double>(c.branch),
                                    c.s + radius);
      segs.push_back({c.branch, own_a, own_b});
      total += own_b - own_a;
      if (radius > c.s) {
        for (int m = 1; m <= N; ++m) {
          if (m == c.branch) continue;
          const double reach = std::min(static_cast<double>(m), radius - c.s);
          if (reach <= 0.0) continue;
          segs.push_back({m, 0.0, reach});
          total += reach;
        }
      }
      double pick = rng.uniform(0.0, total);
      for (const auto& seg : segs) {
        const double len = seg.b - seg.a;
        if (pick <= len || &seg == &segs.back())
          return spike_pt(seg.br, std::clamp(seg.a + pick, seg.a, seg.b));
        pick -= len;
      }
      return center;
    }
    case Kind::Book: {
      const auto& c = std::get<BookPt>(center);
      const auto& bp = s.book();
      // Disjoint per-page proposal boxes weighted by area.
      struct Box {
        int pg;
        double u0, u1, v0, v1;
      };
      std::vector<Box> boxes;
      const double u_lo = std::max(0.0, c.u - radius);
      const double u_hi = std::min(bp.leg, c.u + radius);
      boxes.push_back({c.page, u_lo, u_hi, std::max(0.0, c.v - radius),
                       std::min(bp.leg, c.v + radius)});
      if (radius > c.v) {
        for (int q = 1; q <= bp.pages; ++q) {
          if (q == c.page) continue;
          boxes.push_back({q, u_lo, u_hi, 0.0,
                           std::min(bp.leg, radius - c.v)});
        }
      }
      double total = 0.0;
      for (const auto& b : boxes) total += (b.u1 - b.u0) * (b.v1 - b.v0);
      for (int tries = 0; tries < 200000; ++tries) {
        double pick = rng.uniform(0.0, total);
        const Box* chosen = &boxes.back();
        for (const auto& b : boxes) {
          const double area = (b.u1 - b.u0) * (b.v1 - b.v0);
          if (pick <= area) {
            chosen = &b;
            break;
          }
          pick -= area;
        }
        const double u = rng.uniform(chosen->u0, chosen->u1);
        const double v = rng.uniform(chosen->v0, chosen->v1);
        if (u + v > bp.leg) continue;
        const Point cand = book_pt(chosen->pg, u, v);
        if (detail::dist(s, center, cand) <= radius) return cand;
      }
      throw numerical_error("ball rejection sampling failed to accept", 0.0,
                            radius);
    }
    case Kind::HalfPlane: {
      const auto& c = std::get<HalfPlanePt>(center);
      // The hyperbolic circle of radius r around (x0, y0) is the euclidean
      // circle centered (x0, y0 cosh r) with radius y0 sinh r.
      const double ec_y = c.y * std::cosh(radius);
      const double er = c.y * std::sinh(radius);
      const double rho = er * std::sqrt(rng.uniform(0.0, 1.0));
      const double th = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      return halfplane_pt(c.x + rho * std::cos(th), ec_y + rho * std::sin(th));
    }
  }
  throw input_error("unknown space kind");
}

// Deterministic eps/2-net of the closed ball around `center`: coordinate
// grids per space, nodes slightly outside pulled back to the sphere. The
// sphere itself ends up covered, which the cone certificate needs. mesh is
// the target covering radius as a fraction of eps; 0.45 leaves slack under
// the eps/2 requirement.
inline std::vector<Point> build_ball_net(const SpaceHandle& s,
                                         const Point& center, double eps,
                                         double mesh = 0.45) {
  if (!(eps > 0.0)) throw input_error("net radius must be positive");
  if (!(mesh > 0.0 && mesh < 1.0))
    throw input_error("mesh fraction must lie in (0, 1)");
  validate_point(s, center);
  std::vector<Point> net;
  const ConvexBody ball = closed_ball(center, eps);
  switch (s.kind) {
    case Kind::Euclidean: {
      const auto& c = std::get<EuclideanPt>(center);
      const int dim = s.euclidean().dim;
      const double diag = std::sqrt(static_cast<double>(dim));
      const double h = mesh * eps / diag;
      const int K = static_cast<int>(std::ceil(eps / h)) + 1;
      std::vector<int> idx(dim, -K);
      while (true) {
        std::vector<double> x(dim);
        double n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
          x[i] = c.x[i] + h * idx[i];
          n2 += detail::sq(h * idx[i]);
        }
        const double d = std::sqrt(n2);
        if (d <= eps)
          net.push_back(EuclideanPt{x});
        else if (d <= eps + h * diag)
          net.push_back(project_to_ball(s, ball, EuclideanPt{x}));
        int i = 0;
        for (; i < dim; ++i) {
          if (++idx[i] <= K) break;
          idx[i] = -K;
        }
        if (i == dim) break;
      }
      return net;
    }
    case Kind::Spike: {
      const auto& c = std::get<SpikePt>(center);
      const int N = s.spike().branches;
      const double h = mesh * eps;
      auto add_segment = [&](int br, double a, double b) {
        if (b < a) return;
        const int steps = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
        for (int i = 0; i <= steps; ++i)
          net.push_back(spike_pt(br, a + (b - a) * i / steps));
      };
      add_segment(c.branch, std::max(0.0, c.s - eps),
                  std::min(static_cast<double>(c.branch), c.s + eps));
      if (eps > c.s)
        for (int m = 1; m <= N; ++m) {
          if (m == c.branch) continue;
          const double reach = std::min(static_cast<double>(m), eps - c.s);
          if (reach > 0.0) add_segment(m, 0.0, reach);
        }
      return net;
    }
    case Kind::Book: {
      const auto& c = std::get<BookPt>(center);
      const auto& bp = s.book();
      const double h = mesh * eps / std::sqrt(2.0);
      auto add_box = [&](int pg, double u0, double u1, double v0, double v1) {
        const int nu = std::max(1, static_cast<int>(std::ceil((u1 - u0) / h)));
        const int nv = std::max(1, static_cast<int>(std::ceil((v1 - v0) / h)));
        for (int i = 0; i <= nu; ++i)
          for (int j = 0; j <= nv; ++j) {
            const double u = u0 + (u1 - u0) * i / nu;
            const double v = v0 + (v1 - v0) * j / nv;
            if (u + v > bp.leg) continue;
            const Point cand = book_pt(pg, u, v);
            const double d = detail::dist(s, center, cand);
            if (d <= eps)
              net.push_back(cand);
            else if (d <= eps + h * std::sqrt(2.0))
              net.push_back(project_to_ball(s, ball, cand));
          }
      };
      const double u_lo = std::max(0.0, c.u - eps);
      const double u_hi = std::min(bp.leg, c.u + eps);
      add_box(c.page, u_lo, u_hi, std::max(0.0, c.v - eps),
              std::min(bp.leg, c.v + eps));
      if (eps > c.v)
        for (int q = 1; q <= bp.pages; ++q) {
          if (q == c.page) continue;
          add_box(q, u_lo, u_hi, 0.0, std::min(bp.leg, eps - c.v));
        }
      return net;
    }
    case Kind::HalfPlane: {
      const auto& c = std::get<HalfPlanePt>(center);
      const double step = mesh * eps;
      const int n_r = std::max(1, static_cast<int>(std::ceil(eps / step)));
      net.push_back(center);
      for (int i = 1; i <= n_r; ++i) {
        const double r = eps * i / n_r;
        const int m = std::max(
            8, static_cast<int>(std::ceil(2.0 * 3.14159265358979323846 *
                                          std::sinh(r) / step)));
        for (int j = 0; j < m; ++j) {
          const double phi = 2.0 * 3.14159265358979323846 * j / m;
          net.push_back(halfplane_pt(
              c.x + c.y * std::sinh(r) * std::cos(phi),
              c.y * (std::cosh(r) + std::sinh(r) * std::sin(phi))));
        }
      }
      return net;
    }
  }
  throw input_error("unknown space kind");
}

}  // namespace hadamard
