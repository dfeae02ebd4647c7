#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "rwre/direction.hpp"
#include "rwre/parallel.hpp"

namespace rwre {

/// A quadrature node on [0, 2pi)^d: the angles and their cosines.
struct TorusPoint {
  std::span<const double> u;
  std::span<const double> cos_u;
};

struct TorusOptions {
  int n_per_axis = 256;
  /// Shift the grid by half a cell (midpoint rule) so that u = 0 and
  /// u = (pi,...,pi) are never nodes.
  bool exclude_origin = true;
  /// The integrand is even in every angle (f(u) = f(2pi - u) axis-wise):
  /// sum one half-period per axis and double. Requires exclude_origin and
  /// an even n_per_axis. The result is identical up to rounding.
  bool even_fold = false;
};

namespace detail {

template <typename R>
R zero_of() {
  if constexpr (std::is_arithmetic_v<R>) {
    return R{0};
  } else {
    return R::Zero();
  }
}

template <typename R>
bool all_finite(const R& r) {
  if constexpr (std::is_arithmetic_v<R>) {
    return std::isfinite(r);
  } else {
    return r.allFinite();
  }
}

}  // namespace detail

/// Tensor-product rectangle rule over [0, 2pi]^d with n_per_axis nodes per
/// axis. Returns the integral (not the mean). The integrand returns a double
/// or a fixed-size Eigen array; a non-finite value at any node throws
/// std::domain_error.
///
/// Slabs along the first axis are summed independently and combined by a
/// pairwise tree, so the result does not depend on the thread count.
template <typename F>
auto torus_quadrature(int d, F&& integrand, const TorusOptions& opt) {
  using R = std::decay_t<decltype(integrand(std::declval<TorusPoint>()))>;
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("torus dimension must be in [1,3]");
  const int n = opt.n_per_axis;
  if (n < 2) throw std::invalid_argument("n_per_axis must be at least 2");
  if (opt.even_fold && (!opt.exclude_origin || n % 2 != 0)) {
    throw std::invalid_argument("even_fold needs the midpoint grid and an even n_per_axis");
  }
  const double h = 2.0 * std::numbers::pi / n;
  const double shift = opt.exclude_origin ? 0.5 : 0.0;
  const int m = opt.even_fold ? n / 2 : n;

  std::vector<double> angle(static_cast<std::size_t>(m)), cosine(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    angle[static_cast<std::size_t>(i)] = (i + shift) * h;
    cosine[static_cast<std::size_t>(i)] = std::cos(angle[static_cast<std::size_t>(i)]);
  }

  std::vector<R> slab(static_cast<std::size_t>(m));
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t i0) {
    std::array<double, kMaxDim> u{}, c{};
    u[0] = angle[i0];
    c[0] = cosine[i0];
    TorusPoint pt{std::span<const double>(u.data(), static_cast<std::size_t>(d)),
                  std::span<const double>(c.data(), static_cast<std::size_t>(d))};
    R acc = detail::zero_of<R>();
    auto visit = [&] {
      const R v = integrand(pt);
      if (!detail::all_finite(v)) throw std::domain_error("non-finite integrand at a quadrature node");
      acc += v;
    };
    if (d == 1) {
      visit();
    } else if (d == 2) {
      for (int i1 = 0; i1 < m; ++i1) {
        u[1] = angle[static_cast<std::size_t>(i1)];
        c[1] = cosine[static_cast<std::size_t>(i1)];
        visit();
      }
    } else {
      for (int i1 = 0; i1 < m; ++i1) {
        u[1] = angle[static_cast<std::size_t>(i1)];
        c[1] = cosine[static_cast<std::size_t>(i1)];
        for (int i2 = 0; i2 < m; ++i2) {
          u[2] = angle[static_cast<std::size_t>(i2)];
          c[2] = cosine[static_cast<std::size_t>(i2)];
          visit();
        }
      }
    }
    slab[i0] = acc;
  });

  double cell = std::pow(h, d);
  if (opt.even_fold) cell *= std::pow(2.0, d);
  R total = pairwise_sum(slab);
  return R(total * cell);
}

/// Integral divided by (2pi)^d.
template <typename F>
auto torus_mean(int d, F&& integrand, const TorusOptions& opt) {
  auto total = torus_quadrature(d, std::forward<F>(integrand), opt);
  return decltype(total)(total / std::pow(2.0 * std::numbers::pi, d));
}

}  // namespace rwre
