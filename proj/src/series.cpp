#include "rwre/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rwre {

namespace {

constexpr long kDefaultHorizon = 100000;
constexpr std::size_t kMaxCells = 100'000'000;

// Walk law after r steps on the box [-r, r]^d, flattened with axis 0 fastest.
struct Law {
  int d;
  long r;
  std::vector<double> p;

  [[nodiscard]] long side() const { return 2 * r + 1; }

  [[nodiscard]] double at(const Site& x) const {
    long idx = 0, stride = 1;
    for (int a = 0; a < d; ++a) {
      if (std::abs(x[a]) > r) return 0.0;
      idx += (x[a] + r) * stride;
      stride *= side();
    }
    return p[static_cast<std::size_t>(idx)];
  }
};

Law advance(const Law& old, const TransitionKernel& kernel) {
  const int d = old.d;
  Law next{d, old.r + 1, {}};
  const long ls = old.side(), ns = next.side();
  std::size_t cells = 1;
  for (int a = 0; a < d; ++a) cells *= static_cast<std::size_t>(ns);
  if (cells > kMaxCells) throw std::runtime_error("series oracle box exceeds memory budget");
  next.p.assign(cells, 0.0);

  long nstride[kMaxDim] = {1, ns, ns * ns};
  long offset[2 * kMaxDim];
  for (int e = 0; e < 2 * d; ++e) offset[e] = (e % 2 == 0 ? 1 : -1) * nstride[e / 2];

  const long l1 = d > 1 ? ls : 1, l2 = d > 2 ? ls : 1;
  for (long i2 = 0; i2 < l2; ++i2) {
    for (long i1 = 0; i1 < l1; ++i1) {
      const std::size_t src_row = static_cast<std::size_t>((i2 * ls + i1) * ls);
      long dst_row = 1;
      if (d > 1) dst_row += (i1 + 1) * nstride[1];
      if (d > 2) dst_row += (i2 + 1) * nstride[2];
      for (long i0 = 0; i0 < ls; ++i0) {
        const double v = old.p[src_row + static_cast<std::size_t>(i0)];
        if (v == 0.0) continue;
        const long dst = dst_row + i0;
        for (int e = 0; e < 2 * d; ++e) next.p[static_cast<std::size_t>(dst + offset[e])] += v * kernel[e];
      }
    }
  }
  return next;
}

}  // namespace

SeriesResult series_oracle(const TransitionKernel& p, std::span<const std::pair<Site, Site>> pairs,
                           const SeriesOptions& opt) {
  if (!(opt.k >= 0.0 && opt.k <= 1.0)) throw std::invalid_argument("survival factor k must lie in [0,1]");
  const int d = p.dim();
  const long horizon = opt.horizon > 0 ? opt.horizon : kDefaultHorizon;

  // Translation invariance: G(z, z') = G(0, z' - z).
  std::vector<Site> targets;
  int reach = 0;
  for (const auto& [z, zp] : pairs) {
    Site x = origin();
    for (int a = 0; a < d; ++a) x[a] = zp[a] - z[a];
    reach = std::max(reach, l1_norm(x));
    targets.push_back(x);
  }

  SeriesResult out;
  out.values.assign(targets.size(), 0.0);
  Law law{d, 0, {1.0}};
  double weight = 1.0;
  double block_sum = 0.0, prev_block = -1.0;  // no block completed yet
  std::vector<double> block_acc(targets.size(), 0.0);

  for (long n = 0; n < horizon; ++n) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const double c = weight * law.at(targets[t]);
      out.values[t] += c;
      block_acc[t] += c;
    }
    out.steps = n + 1;
    if (opt.k < 1.0) {
      const double next_weight = weight * opt.k;
      out.tail_bound = next_weight / (1.0 - opt.k);
      if (out.tail_bound <= opt.tol) return out;
      if (next_weight == 0.0) return out;
    } else if ((n + 1) % opt.block == 0) {
      block_sum = *std::max_element(block_acc.begin(), block_acc.end());
      std::fill(block_acc.begin(), block_acc.end(), 0.0);
      const double q = prev_block > 0.0 ? block_sum / prev_block : 1.0;
      out.tail_bound = q < 1.0 ? block_sum * q / (1.0 - q) : std::numeric_limits<double>::infinity();
      if (prev_block < 0.0) out.tail_bound = std::numeric_limits<double>::infinity();
      if (block_sum == 0.0 && n + 1 > reach) out.tail_bound = 0.0;
      prev_block = block_sum;
      if (n + 1 > reach && out.tail_bound <= opt.tol) return out;
    }
    weight *= opt.k;
    law = advance(law, p);
  }
  throw std::runtime_error("series oracle horizon too small for the requested tolerance");
}

}  // namespace rwre
