#include "varistore/grid_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "varistore/error.hpp"

namespace varistore {

namespace {

void require_nonempty(const ImageGrid& u, const char* context) {
  if (u.empty()) {
    throw InvalidArgument(std::string(context) + ": empty grid");
  }
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(
    std::size_t n) {
  if (n == 1) return {{0.0}, {2.0}};
  std::vector<double> nodes(n), weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return {nodes, weights};
}

// Index reflection with period 2n (half-sample symmetric extension).
std::size_t reflect(long i, long n) {
  const long period = 2 * n;
  long m = i % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < n ? m : period - 1 - m);
}

}  // namespace

VectorField forward_gradient(const ImageGrid& u) {
  require_nonempty(u, "forward_gradient");
  const std::size_t w = u.width(), hgt = u.height();
  const double inv_h = 1.0 / u.spacing();
  VectorField g(w, hgt);
  auto gx = g.x();
  auto gy = g.y();
  for (std::size_t y = 0; y < hgt; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t i = y * w + x;
      gx[i] = x + 1 < w ? (u(x + 1, y) - u(x, y)) * inv_h : 0.0;
      gy[i] = y + 1 < hgt ? (u(x, y + 1) - u(x, y)) * inv_h : 0.0;
    }
  }
  return g;
}

VectorField backward_gradient(const ImageGrid& u) {
  require_nonempty(u, "backward_gradient");
  const std::size_t w = u.width(), hgt = u.height();
  const double inv_h = 1.0 / u.spacing();
  VectorField g(w, hgt);
  auto gx = g.x();
  auto gy = g.y();
  for (std::size_t y = 0; y < hgt; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t i = y * w + x;
      gx[i] = x > 0 ? (u(x, y) - u(x - 1, y)) * inv_h : 0.0;
      gy[i] = y > 0 ? (u(x, y) - u(x, y - 1)) * inv_h : 0.0;
    }
  }
  return g;
}

ImageGrid divergence(const VectorField& p, double spacing) {
  if (p.size() == 0) throw InvalidArgument("divergence: empty field");
  const std::size_t w = p.width(), hgt = p.height();
  const double inv_h = 1.0 / spacing;
  ImageGrid d(w, hgt, spacing);
  auto px = p.x();
  auto py = p.y();
  for (std::size_t y = 0; y < hgt; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t i = y * w + x;
      double v = 0.0;
      if (x + 1 < w) v += px[i];
      if (x > 0) v -= px[i - 1];
      if (y + 1 < hgt) v += py[i];
      if (y > 0) v -= py[i - w];
      d[i] = v * inv_h;
    }
  }
  return d;
}

ImageGrid backward_divergence(const VectorField& q, double spacing) {
  if (q.size() == 0) throw InvalidArgument("backward_divergence: empty field");
  const std::size_t w = q.width(), hgt = q.height();
  const double inv_h = 1.0 / spacing;
  ImageGrid d(w, hgt, spacing);
  auto qx = q.x();
  auto qy = q.y();
  for (std::size_t y = 0; y < hgt; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t i = y * w + x;
      double v = 0.0;
      if (x + 1 < w) v += qx[i + 1];
      if (x > 0) v -= qx[i];
      if (y + 1 < hgt) v += qy[i + w];
      if (y > 0) v -= qy[i];
      d[i] = v * inv_h;
    }
  }
  return d;
}

ImageGrid laplacian(const ImageGrid& u) {
  require_nonempty(u, "laplacian");
  const std::size_t w = u.width(), hgt = u.height();
  const double inv_h2 = 1.0 / (u.spacing() * u.spacing());
  ImageGrid out(w, hgt, u.spacing());
  for (std::size_t y = 0; y < hgt; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double c = u(x, y);
      double v = 0.0;
      if (x + 1 < w) v += u(x + 1, y) - c;
      if (x > 0) v += u(x - 1, y) - c;
      if (y + 1 < hgt) v += u(x, y + 1) - c;
      if (y > 0) v += u(x, y - 1) - c;
      out(x, y) = v * inv_h2;
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("gaussian_kernel: rho must be > 0");
  const long radius = static_cast<long>(std::ceil(3.0 * rho));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (long i = -radius; i <= radius; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / (2.0 * rho * rho));
    k[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : k) v /= total;
  return k;
}

ImageGrid gaussian_convolve(const ImageGrid& u, double rho) {
  require_nonempty(u, "gaussian_convolve");
  const std::vector<double> k = gaussian_kernel(rho);
  const long radius = static_cast<long>(k.size() / 2);
  const long w = static_cast<long>(u.width());
  const long hgt = static_cast<long>(u.height());

  ImageGrid tmp(u.width(), u.height(), u.spacing());
  for (long y = 0; y < hgt; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long j = -radius; j <= radius; ++j) {
        acc += k[static_cast<std::size_t>(j + radius)] *
               u(reflect(x + j, w), static_cast<std::size_t>(y));
      }
      tmp(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  }
  ImageGrid out(u.width(), u.height(), u.spacing());
  for (long y = 0; y < hgt; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long j = -radius; j <= radius; ++j) {
        acc += k[static_cast<std::size_t>(j + radius)] *
               tmp(static_cast<std::size_t>(x), reflect(y + j, hgt));
      }
      out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  }
  return out;
}

PiecewiseLinearInterpolant::PiecewiseLinearInterpolant(ImageGrid grid)
    : grid_(std::move(grid)) {
  require_nonempty(grid_, "interpolate");
}

double PiecewiseLinearInterpolant::extent_x() const noexcept {
  return static_cast<double>(grid_.width()) * grid_.spacing();
}

double PiecewiseLinearInterpolant::extent_y() const noexcept {
  return static_cast<double>(grid_.height()) * grid_.spacing();
}

double PiecewiseLinearInterpolant::operator()(double x, double y) const {
  const double ex = extent_x(), ey = extent_y();
  const double slack = 1e-12 * std::max(ex, ey);
  if (!(x >= -slack && x <= ex + slack && y >= -slack && y <= ey + slack)) {
    throw InvalidArgument("interpolant evaluated outside its domain");
  }
  const double h = grid_.spacing();
  const std::size_t w = grid_.width(), hgt = grid_.height();

  // Lattice coordinates relative to the first vertex, clamped to the hull.
  const double fx = std::clamp(x / h - 0.5, 0.0, static_cast<double>(w - 1));
  const double fy = std::clamp(y / h - 0.5, 0.0, static_cast<double>(hgt - 1));
  const std::size_t i0 =
      w > 1 ? std::min(static_cast<std::size_t>(fx), w - 2) : 0;
  const std::size_t j0 =
      hgt > 1 ? std::min(static_cast<std::size_t>(fy), hgt - 2) : 0;
  const std::size_t i1 = w > 1 ? i0 + 1 : 0;
  const std::size_t j1 = hgt > 1 ? j0 + 1 : 0;
  const double tx = fx - static_cast<double>(i0);
  const double ty = fy - static_cast<double>(j0);

  const double u00 = grid_(i0, j0), u10 = grid_(i1, j0);
  const double u01 = grid_(i0, j1), u11 = grid_(i1, j1);
  if (tx >= ty) return u00 + tx * (u10 - u00) + ty * (u11 - u10);
  return u00 + ty * (u01 - u00) + tx * (u11 - u01);
}

PiecewiseLinearInterpolant interpolate(const ImageGrid& grid) {
  return PiecewiseLinearInterpolant(grid);
}

ImageGrid sample_cell_average(const ContinuousField& f, std::size_t n,
                              double extent, std::size_t points_per_axis) {
  if (n < 1) throw InvalidArgument("sample_cell_average: n must be >= 1");
  if (points_per_axis < 1) {
    throw InvalidArgument("sample_cell_average: need at least one node");
  }
  const double h = extent / static_cast<double>(n);
  const auto [nodes, weights] = gauss_legendre(points_per_axis);
  ImageGrid out(n, n, h);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double cx = (static_cast<double>(i) + 0.5) * h;
      const double cy = (static_cast<double>(j) + 0.5) * h;
      double acc = 0.0;
      for (std::size_t b = 0; b < nodes.size(); ++b) {
        for (std::size_t a = 0; a < nodes.size(); ++a) {
          acc += weights[a] * weights[b] *
                 f(cx + 0.5 * h * nodes[a], cy + 0.5 * h * nodes[b]);
        }
      }
      out(i, j) = 0.25 * acc;
    }
  }
  return out;
}

double l2_distance(const ContinuousField& f, const ContinuousField& g,
                   double extent_x, double extent_y, std::size_t samples_x,
                   std::size_t samples_y) {
  if (samples_x == 0 || samples_y == 0) {
    throw InvalidArgument("l2_distance: sample counts must be positive");
  }
  const double dx = extent_x / static_cast<double>(samples_x);
  const double dy = extent_y / static_cast<double>(samples_y);
  double acc = 0.0;
  for (std::size_t j = 0; j < samples_y; ++j) {
    const double y = (static_cast<double>(j) + 0.5) * dy;
    for (std::size_t i = 0; i < samples_x; ++i) {
      const double x = (static_cast<double>(i) + 0.5) * dx;
      const double d = f(x, y) - g(x, y);
      acc += d * d;
    }
  }
  return std::sqrt(acc * dx * dy);
}

double l2_distance(const PiecewiseLinearInterpolant& a,
                   const PiecewiseLinearInterpolant& b) {
  const double ex = std::min(a.extent_x(), b.extent_x());
  const double ey = std::min(a.extent_y(), b.extent_y());
  const double h = std::min(a.grid().spacing(), b.grid().spacing());
  const auto sx = static_cast<std::size_t>(std::llround(4.0 * ex / h));
  const auto sy = static_cast<std::size_t>(std::llround(4.0 * ey / h));
  return l2_distance(std::cref(a), std::cref(b), ex, ey, sx, sy);
}

double l2_norm(const PiecewiseLinearInterpolant& a) {
  const double h = a.grid().spacing();
  const auto sx = static_cast<std::size_t>(std::llround(4.0 * a.extent_x() / h));
  const auto sy = static_cast<std::size_t>(std::llround(4.0 * a.extent_y() / h));
  return l2_distance(std::cref(a), [](double, double) { return 0.0; },
                     a.extent_x(), a.extent_y(), sx, sy);
}

double modulus_of_continuity(const ImageGrid& u, double t) {
  require_nonempty(u, "modulus_of_continuity");
  if (!(t > 0.0)) {
    throw InvalidArgument("modulus_of_continuity: t must be positive");
  }
  const double h = u.spacing();
  const long w = static_cast<long>(u.width());
  const long hgt = static_cast<long>(u.height());
  const long reach = static_cast<long>(std::floor(t / h + 1e-9));
  const double reach_sq = (t / h) * (t / h) * (1.0 + 1e-12);

  double best = 0.0;
  // Shifts s and -s give the same norm; scan a half plane.
  for (long sy = 0; sy <= reach; ++sy) {
    for (long sx = -reach; sx <= reach; ++sx) {
      if (sy == 0 && sx <= 0) continue;
      if (static_cast<double>(sx * sx + sy * sy) > reach_sq) continue;
      if (std::abs(sx) >= w || sy >= hgt) continue;
      double acc = 0.0;
      for (long y = 0; y + sy < hgt; ++y) {
        for (long x = std::max(0L, -sx); x < w && x + sx < w; ++x) {
          const double d =
              u(static_cast<std::size_t>(x + sx),
                static_cast<std::size_t>(y + sy)) -
              u(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
          acc += d * d;
        }
      }
      best = std::max(best, std::sqrt(acc) * h);
    }
  }
  return best;
}

}  // namespace varistore
