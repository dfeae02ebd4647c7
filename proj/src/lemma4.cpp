#include "rwre/lemma4.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "rwre/fit.hpp"
#include "rwre/parallel.hpp"

namespace rwre {

namespace {

// Slices on the box [-R-1, R+1]^d; the outer layer stays zero so that every
// gather inside radius R reads valid memory.
struct Grid {
  int d;
  long R;
  long side;
  std::array<long, kMaxDim> stride{};
  std::size_t cells = 1;

  Grid(int dim, long radius) : d(dim), R(radius), side(2 * radius + 3) {
    long s = 1;
    for (int a = 0; a < kMaxDim; ++a) {
      stride[static_cast<std::size_t>(a)] = a < d ? s : 0;
      if (a < d) {
        cells *= static_cast<std::size_t>(side);
        s *= side;
      }
    }
  }

  [[nodiscard]] long centre() const {
    long c = 0;
    for (int a = 0; a < d; ++a) c += (R + 1) * stride[static_cast<std::size_t>(a)];
    return c;
  }

  [[nodiscard]] long offset(int dir) const {
    return (dir % 2 == 0 ? 1 : -1) * stride[static_cast<std::size_t>(dir / 2)];
  }

  // Calls row(base, len) for every axis-0 row of the cube of radius r, in
  // a fixed order; rows are indexed for parallel evaluation.
  [[nodiscard]] std::size_t rows(long r) const {
    const long w = 2 * r + 1;
    return static_cast<std::size_t>(d == 1 ? 1 : (d == 2 ? w : w * w));
  }
  [[nodiscard]] long row_base(long r, std::size_t k) const {
    const long w = 2 * r + 1;
    long base = (R + 1 - r) * stride[0];
    if (d >= 2) base += (R + 1 - r + static_cast<long>(k) % w) * stride[1];
    if (d >= 3) base += (R + 1 - r + static_cast<long>(k) / w) * stride[2];
    return base;
  }
};

// One step: next(x) = sum_e p(e) cur(x - e) over the cube of radius r.
void advance(const Grid& g, const TransitionKernel& p, const std::vector<double>& cur, std::vector<double>& next,
             long r) {
  const int nd = 2 * g.d;
  std::array<long, 2 * kMaxDim> off{};
  for (int e = 0; e < nd; ++e) off[static_cast<std::size_t>(e)] = g.offset(e);
  const long w = 2 * r + 1;
  parallel_for(g.rows(r), [&](std::size_t k) {
    const long base = g.row_base(r, k);
    for (long i = 0; i < w; ++i) {
      const long x = base + i;
      double acc = 0.0;
      for (int e = 0; e < nd; ++e) acc += p[e] * cur[static_cast<std::size_t>(x - off[static_cast<std::size_t>(e)])];
      next[static_cast<std::size_t>(x)] = acc;
    }
  });
}

template <typename Term>
double row_reduce(const Grid& g, long r, Term&& term) {
  const long w = 2 * r + 1;
  std::vector<double> partial(g.rows(r));
  parallel_for(partial.size(), [&](std::size_t k) {
    const long base = g.row_base(r, k);
    double acc = 0.0;
    for (long i = 0; i < w; ++i) acc += term(base + i);
    partial[k] = acc;
  });
  return pairwise_sum(partial);
}

}  // namespace

DecayTable lemma4_decay(const TransitionKernel& s, const std::vector<long>& n_list, const std::vector<int>& dirs,
                        const Lemma4Options& opt) {
  if (!s.is_symmetric()) throw std::invalid_argument("lemma4_decay needs a symmetric kernel");
  if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()) || n_list.front() < 1) {
    throw std::invalid_argument("n_list must be a non-empty increasing list of positive integers");
  }
  if (dirs.empty()) throw std::invalid_argument("at least one direction is required");
  const int d = s.dim();
  for (int e : dirs) {
    if (e < 0 || e >= 2 * d) throw std::invalid_argument("direction index out of range");
  }
  const long N = n_list.back() + 1;
  const long hoeffding =
      static_cast<long>(std::ceil(std::sqrt(2.0 * static_cast<double>(N) * std::log(2.0 * d / opt.truncation_eps))));
  const long R = std::min(N, hoeffding);
  const Grid g(d, R);
  if (2 * g.cells * sizeof(double) > opt.memory_budget) throw std::length_error("lemma4 slices exceed the memory budget");

  DecayTable table;
  table.n = n_list;
  table.directions = dirs;
  table.radius = static_cast<int>(R);
  table.l1 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_list.size()), static_cast<Eigen::Index>(dirs.size()));

  std::vector<double> cur(g.cells, 0.0), next(g.cells, 0.0);
  const long c = g.centre();
  cur[static_cast<std::size_t>(c)] = 1.0;

  // Parity of |z|_1 for the cell x.
  auto parity = [&](long x) {
    long sum = 0;
    for (int a = 0; a < d; ++a) sum += (x / g.stride[static_cast<std::size_t>(a)]) % g.side - (R + 1);
    return static_cast<int>(((sum % 2) + 2) % 2);
  };

  std::size_t row = 0;
  for (long n = 0; n < N && row < n_list.size(); ++n) {
    const long r_cur = std::min(n, R), r_next = std::min(n + 1, R);
    advance(g, s, cur, next, r_next);
    if (n == n_list[row]) {
      const double mass = row_reduce(g, r_next, [&](long x) { return next[static_cast<std::size_t>(x)]; });
      table.max_mass_defect = std::max(table.max_mass_defect, std::abs(1.0 - mass));
      const int want = static_cast<int>((n + 1) % 2);
      for (std::size_t j = 0; j < dirs.size(); ++j) {
        const long off = g.offset(dirs[j]);
        const long r = std::max(r_next, std::min(r_cur + 1, R));
        table.l1(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = row_reduce(g, r, [&](long x) {
          if (opt.parity_only && parity(x) != want) return 0.0;
          return std::abs(next[static_cast<std::size_t>(x)] - cur[static_cast<std::size_t>(x - off)]);
        });
      }
      ++row;
      while (row < n_list.size() && n_list[row] == n) {
        table.l1.row(static_cast<Eigen::Index>(row)) = table.l1.row(static_cast<Eigen::Index>(row - 1));
        ++row;
      }
    }
    std::swap(cur, next);
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < opt.fit_n_min) continue;
    xs.push_back(static_cast<double>(n_list[i]));
    ys.push_back(table.l1.row(static_cast<Eigen::Index>(i)).maxCoeff());
  }
  table.fitted_exponent = xs.size() >= 2 ? loglog_fit(xs, ys).slope : std::nan("");
  return table;
}

std::vector<double> walk_law(const TransitionKernel& p, long n, int r) {
  const int d = p.dim();
  if (n < 0 || r < 0) throw std::invalid_argument("walk_law needs n >= 0 and r >= 0");
  const Grid g(d, std::max<long>(r, n));
  std::vector<double> cur(g.cells, 0.0), next(g.cells, 0.0);
  cur[static_cast<std::size_t>(g.centre())] = 1.0;
  for (long t = 0; t < n; ++t) {
    advance(g, p, cur, next, std::min(t + 1, g.R));
    std::swap(cur, next);
  }
  const long side = 2L * r + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::pow(side, d)));
  const long shift = g.R - r;
  const long l1 = d > 1 ? side : 1, l2 = d > 2 ? side : 1;
  for (long k = 0; k < l2; ++k) {
    for (long j = 0; j < l1; ++j) {
      for (long i = 0; i < side; ++i) {
        long x = (i + shift + 1) * g.stride[0];
        if (d > 1) x += (j + shift + 1) * g.stride[1];
        if (d > 2) x += (k + shift + 1) * g.stride[2];
        out.push_back(cur[static_cast<std::size_t>(x)]);
      }
    }
  }
  return out;
}

}  // namespace rwre
