#include "mixvol/zero_counting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <mutex>

#include "mixvol/error.hpp"

namespace mixvol {

namespace {

bool positive(double x) noexcept { return x >= 0.0; }

double bisect(const std::function<double(double)>& f, double a, double b, double fa, double tol) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (std::abs(fm) < tol || b - a < 1e-15 * std::max(1.0, std::abs(mid))) return mid;
    if (positive(fm) == positive(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

void require_shape(const Realization& r, const Region& region, int d, int k) {
  validate(region);
  if (r.dim() != d || r.n_components() != k || region.dim() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "statistic needs d=" + std::to_string(d) + ", k=" + std::to_string(k));
  }
}

struct Root2D {
  double x;
  double y;
};

// Newton's method on (X1, X2). Returns false when it fails to converge.
bool newton_2d(const Realization& r, std::array<double, 2> start, double tol, double max_travel,
               Root2D& root) {
  std::array<double, 2> t = start;
  std::array<double, 2> g1{};
  std::array<double, 2> g2{};
  for (int iter = 0; iter < 50; ++iter) {
    const double f1 = r.value_and_gradient(0, t, g1);
    const double f2 = r.value_and_gradient(1, t, g2);
    const double det = g1[0] * g2[1] - g1[1] * g2[0];
    if (!(std::abs(det) > 1e-300) || !std::isfinite(det)) return false;
    const double dx = (f1 * g2[1] - f2 * g1[1]) / det;
    const double dy = (g1[0] * f2 - g2[0] * f1) / det;
    t[0] -= dx;
    t[1] -= dy;
    if (std::hypot(t[0] - start[0], t[1] - start[1]) > max_travel) return false;
    if (std::hypot(dx, dy) < 1e-10) {
      const double e1 = r.value(0, t);
      const double e2 = r.value(1, t);
      if (std::hypot(e1, e2) < tol) {
        root = {t[0], t[1]};
        return true;
      }
    }
  }
  return false;
}

bool mixed_signs(double a, double b, double c, double d) noexcept {
  const bool pa = positive(a);
  return pa != positive(b) || pa != positive(c) || pa != positive(d);
}

std::size_t count_roots_2d(const Realization& r, const Region& region, std::size_t grid_n,
                           double tol) {
  const std::array<double, 2> h{(region.upper[0] - region.lower[0]) / static_cast<double>(grid_n),
                                (region.upper[1] - region.lower[1]) / static_cast<double>(grid_n)};
  // One extra cell on every side so roots next to the boundary get a seed.
  const std::array<double, 2> origin{region.lower[0] - h[0], region.lower[1] - h[1]};
  const std::size_t nodes = grid_n + 3;
  const Matrix x1 = r.lattice_values(0, origin, h, nodes, nodes);
  const Matrix x2 = r.lattice_values(1, origin, h, nodes, nodes);
  const double travel = 4.0 * std::hypot(h[0], h[1]);

  std::vector<Root2D> roots;
  for (Eigen::Index i = 0; i + 1 < static_cast<Eigen::Index>(nodes); ++i) {
    for (Eigen::Index j = 0; j + 1 < static_cast<Eigen::Index>(nodes); ++j) {
      if (!mixed_signs(x1(i, j), x1(i + 1, j), x1(i, j + 1), x1(i + 1, j + 1))) continue;
      if (!mixed_signs(x2(i, j), x2(i + 1, j), x2(i, j + 1), x2(i + 1, j + 1))) continue;
      const double cx = origin[0] + (static_cast<double>(i) + 0.5) * h[0];
      const double cy = origin[1] + (static_cast<double>(j) + 0.5) * h[1];
      auto near_cell = [&](const Root2D& p) {
        return std::abs(p.x - cx) <= 1.5 * h[0] && std::abs(p.y - cy) <= 1.5 * h[1];
      };
      Root2D found{};
      bool have = newton_2d(r, {cx, cy}, tol, travel, found);
      if (!have || !near_cell(found)) {
        const std::array<std::array<double, 2>, 4> corners{{{cx - 0.5 * h[0], cy - 0.5 * h[1]},
                                                            {cx + 0.5 * h[0], cy - 0.5 * h[1]},
                                                            {cx - 0.5 * h[0], cy + 0.5 * h[1]},
                                                            {cx + 0.5 * h[0], cy + 0.5 * h[1]}}};
        for (const auto& c : corners) {
          Root2D alt{};
          if (newton_2d(r, c, tol, travel, alt)) {
            if (!have) {
              found = alt;
              have = true;
            }
            if (near_cell(alt)) {
              found = alt;
              break;
            }
          }
        }
      }
      if (have) roots.push_back(found);
    }
  }

  std::sort(roots.begin(), roots.end(), [](const Root2D& a, const Root2D& b) { return a.x < b.x; });
  std::vector<Root2D> unique;
  for (const auto& p : roots) {
    bool dup = false;
    for (auto it = unique.rbegin(); it != unique.rend() && p.x - it->x <= 1e-6; ++it) {
      if (std::hypot(p.x - it->x, p.y - it->y) <= 1e-6) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(p);
  }
  return static_cast<std::size_t>(std::count_if(unique.begin(), unique.end(), [&](const Root2D& p) {
    const std::array<double, 2> t{p.x, p.y};
    return region.contains(t);
  }));
}

// Point on a cell edge where the linear interpolant vanishes.
std::array<double, 2> edge_point(std::array<double, 2> a, std::array<double, 2> b, double va,
                                 double vb) noexcept {
  const double s = va / (va - vb);
  return {a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])};
}

double distance(std::array<double, 2> a, std::array<double, 2> b) noexcept {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

std::size_t count_sign_changes(const std::function<double(double)>& f, double lower, double upper,
                               std::size_t grid_n, double tol) {
  if (grid_n < 1 || !(lower < upper)) {
    throw Error(ErrorCode::OutOfRange, "need lower < upper and at least one cell");
  }
  const double h = (upper - lower) / static_cast<double>(grid_n);
  std::size_t count = 0;
  double prev_t = lower;
  double prev = f(lower);
  for (std::size_t i = 1; i <= grid_n; ++i) {
    const double t = i == grid_n ? upper : lower + static_cast<double>(i) * h;
    const double cur = f(t);
    if (positive(prev) != positive(cur)) {
      const double root = bisect(f, prev_t, t, prev, tol);
      if (root >= lower && root < upper) ++count;
    }
    prev_t = t;
    prev = cur;
  }
  return count;
}

std::size_t count_zeros_1d(const Realization& r, const Region& region, std::size_t grid_n,
                           double tol, bool self_check) {
  require_shape(r, region, 1, 1);
  if (grid_n < 256) {
    throw Error(ErrorCode::OutOfRange, "count_zeros_1d needs grid_n >= 256");
  }
  auto f = [&r](double t) { return r.value(0, std::span<const double>(&t, 1)); };
  const std::size_t count = count_sign_changes(f, region.lower[0], region.upper[0], grid_n, tol);
  if (self_check &&
      count_sign_changes(f, region.lower[0], region.upper[0], 2 * grid_n, tol) != count) {
    throw Error(ErrorCode::GridTooCoarse, "doubling the grid changed the zero count");
  }
  return count;
}

std::size_t count_zeros_2d(const Realization& r, const Region& region, std::size_t grid_n,
                           double tol, bool self_check) {
  require_shape(r, region, 2, 2);
  if (grid_n < 128) {
    throw Error(ErrorCode::OutOfRange, "count_zeros_2d needs grid_n >= 128");
  }
  const std::size_t count = count_roots_2d(r, region, grid_n, tol);
  if (self_check && count_roots_2d(r, region, 2 * grid_n, tol) != count) {
    throw Error(ErrorCode::GridTooCoarse, "doubling the grid changed the zero count");
  }
  return count;
}

double marching_squares_length(const Matrix& v, const Region& region) {
  if (v.rows() < 2 || v.cols() < 2) {
    throw Error(ErrorCode::OutOfRange, "marching squares needs at least one cell");
  }
  const Eigen::Index nx = v.rows() - 1;
  const Eigen::Index ny = v.cols() - 1;
  const double hx = (region.upper[0] - region.lower[0]) / static_cast<double>(nx);
  const double hy = (region.upper[1] - region.lower[1]) / static_cast<double>(ny);
  double length = 0.0;
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double x0 = region.lower[0] + static_cast<double>(i) * hx;
    const double x1 = x0 + hx;
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double v00 = v(i, j);
      const double v10 = v(i + 1, j);
      const double v11 = v(i + 1, j + 1);
      const double v01 = v(i, j + 1);
      const bool p00 = positive(v00);
      const bool p10 = positive(v10);
      const bool p11 = positive(v11);
      const bool p01 = positive(v01);
      if (p00 == p10 && p00 == p11 && p00 == p01) continue;

      const double y0 = region.lower[1] + static_cast<double>(j) * hy;
      const double y1 = y0 + hy;
      const std::array<double, 2> c00{x0, y0}, c10{x1, y0}, c11{x1, y1}, c01{x0, y1};
      // Edges: bottom (00-10), right (10-11), top (01-11), left (00-01).
      std::array<double, 2> bottom{}, right{}, top{}, left{};
      if (p00 != p10) bottom = edge_point(c00, c10, v00, v10);
      if (p10 != p11) right = edge_point(c10, c11, v10, v11);
      if (p01 != p11) top = edge_point(c01, c11, v01, v11);
      if (p00 != p01) left = edge_point(c00, c01, v00, v01);

      const int crossings = (p00 != p10) + (p10 != p11) + (p01 != p11) + (p00 != p01);
      if (crossings == 2) {
        std::array<std::array<double, 2>, 2> ends{};
        int e = 0;
        if (p00 != p10) ends[e++] = bottom;
        if (p10 != p11) ends[e++] = right;
        if (p01 != p11) ends[e++] = top;
        if (p00 != p01) ends[e++] = left;
        length += distance(ends[0], ends[1]);
      } else {
        // Saddle: cut off the corners whose sign differs from the center.
        const bool center = positive(0.25 * (v00 + v10 + v11 + v01));
        if (p00 != center) length += distance(bottom, left);
        if (p10 != center) length += distance(bottom, right);
        if (p11 != center) length += distance(right, top);
        if (p01 != center) length += distance(top, left);
      }
    }
  }
  return length;
}

double level_length_2d(const std::function<double(double, double)>& f, const Region& region,
                       std::size_t grid_n) {
  validate(region);
  if (region.dim() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "level length needs a 2-D region");
  }
  if (grid_n < 1) {
    throw Error(ErrorCode::OutOfRange, "need at least one cell");
  }
  const auto n = static_cast<Eigen::Index>(grid_n) + 1;
  const double hx = (region.upper[0] - region.lower[0]) / static_cast<double>(grid_n);
  const double hy = (region.upper[1] - region.lower[1]) / static_cast<double>(grid_n);
  Matrix v(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      v(i, j) = f(region.lower[0] + static_cast<double>(i) * hx,
                  region.lower[1] + static_cast<double>(j) * hy);
    }
  }
  return marching_squares_length(v, region);
}

namespace {

double realization_length(const Realization& r, const Region& region, std::size_t grid_n) {
  const std::array<double, 2> h{(region.upper[0] - region.lower[0]) / static_cast<double>(grid_n),
                                (region.upper[1] - region.lower[1]) / static_cast<double>(grid_n)};
  const Matrix v = r.lattice_values(0, {region.lower[0], region.lower[1]}, h, grid_n + 1, grid_n + 1);
  return marching_squares_length(v, region);
}

bool lengths_disagree(double a, double b) noexcept {
  return std::abs(a - b) > 0.01 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double level_length_2d(const Realization& r, const Region& region, std::size_t grid_n,
                       bool self_check) {
  require_shape(r, region, 2, 1);
  if (grid_n < 256) {
    throw Error(ErrorCode::OutOfRange, "level_length_2d needs grid_n >= 256");
  }
  const double length = realization_length(r, region, grid_n);
  if (self_check && lengths_disagree(length, realization_length(r, region, 2 * grid_n))) {
    throw Error(ErrorCode::GridTooCoarse, "doubling the grid moved the nodal length by > 1%");
  }
  return length;
}

ZeroStatistic statistic_for(const FieldSpec& spec) {
  const int d = spec.dim;
  const int k = spec.n_components();
  if (d == 1 && k == 1) return ZeroStatistic::count_1d;
  if (d == 2 && k == 2) return ZeroStatistic::count_2d;
  if (d == 2 && k == 1) return ZeroStatistic::length_2d;
  throw Error(ErrorCode::DimensionMismatch,
              "empirical zero measures exist for (d,k) in {(1,1), (2,2), (2,1)}, got (" +
                  std::to_string(d) + "," + std::to_string(k) + ")");
}

std::vector<double> sample_zero_measures(const FieldSpec& spec, const Region& region,
                                         const EmpiricalConfig& cfg) {
  validate(spec);
  validate(region);
  if (region.dim() != spec.dim) {
    throw Error(ErrorCode::DimensionMismatch, "region and field dimensions differ");
  }
  if (cfg.realizations < 1) {
    throw Error(ErrorCode::OutOfRange, "need at least one realization");
  }
  const ZeroStatistic stat = statistic_for(spec);

  auto measure = [&](const Realization& r, std::size_t grid) -> double {
    switch (stat) {
      case ZeroStatistic::count_1d: return static_cast<double>(count_zeros_1d(r, region, grid, cfg.tol));
      case ZeroStatistic::count_2d: return static_cast<double>(count_zeros_2d(r, region, grid, cfg.tol));
      case ZeroStatistic::length_2d: return level_length_2d(r, region, grid);
    }
    return 0.0;
  };

  std::vector<double> values(cfg.realizations);
  std::vector<char> mismatch(cfg.realizations, 0);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for_each_chunk(cfg.realizations, cfg.execution, cfg.threads, [&](std::size_t i) {
    try {
      const Realization r = simulate_realization(spec, RngStream{cfg.seed, i});
      values[i] = measure(r, cfg.grid);
      if (cfg.self_check) {
        const double fine = measure(r, 2 * cfg.grid);
        mismatch[i] = stat == ZeroStatistic::length_2d ? lengths_disagree(values[i], fine)
                                                       : values[i] != fine;
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  if (cfg.self_check) {
    const auto bad = static_cast<double>(std::count(mismatch.begin(), mismatch.end(), 1));
    if (bad > 0.01 * static_cast<double>(cfg.realizations)) {
      throw Error(ErrorCode::GridTooCoarse,
                  std::to_string(static_cast<long>(bad)) + " of " +
                      std::to_string(cfg.realizations) + " realizations changed on a doubled grid");
    }
  }
  return values;
}

MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed, double ci_level) {
  RunningStats stats;
  for (double v : values) stats.add(v);
  return make_estimate(stats.mean, stats.variance(), values.size(), seed, ci_level);
}

MCEstimate empirical_zero_measure(const FieldSpec& spec, const Region& region,
                                  const EmpiricalConfig& cfg) {
  return summarize(sample_zero_measures(spec, region, cfg), cfg.seed, cfg.ci_level);
}

}  // namespace mixvol
