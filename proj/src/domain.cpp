#include "rwre/domain.hpp"

#include <algorithm>
#include <stdexcept>

namespace rwre {

Domain::Domain(int d, std::vector<Site> sites) : d_(d), sites_(std::move(sites)) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("domain dimension must be in [1,3]");
  if (sites_.empty()) throw std::invalid_argument("domain must be non-empty");
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    for (int a = d; a < kMaxDim; ++a) {
      if (sites_[i][a] != 0) throw std::invalid_argument("site has non-zero coordinate beyond dimension");
    }
    if (!index_.emplace(pack(sites_[i]), static_cast<std::int64_t>(i)).second) {
      throw std::invalid_argument("duplicate site in domain");
    }
  }

  // Connectivity by flood fill from the first site.
  std::vector<char> seen(sites_.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (int dir = 0; dir < 2 * d; ++dir) {
      auto it = index_.find(pack(step(sites_[i], dir)));
      if (it != index_.end() && !seen[it->second]) {
        seen[it->second] = 1;
        ++reached;
        stack.push_back(static_cast<std::size_t>(it->second));
      }
    }
  }
  if (reached != sites_.size()) throw std::invalid_argument("domain is not connected");

  for (const auto& z : sites_) {
    for (int dir = 0; dir < 2 * d; ++dir) {
      const Site y = step(z, dir);
      if (!index_.contains(pack(y))) boundary_.push_back(y);
    }
  }
  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  for (std::size_t b = 0; b < boundary_.size(); ++b) {
    index_.emplace(pack(boundary_[b]), static_cast<std::int64_t>(sites_.size() + b));
  }

  neighbours_.resize(sites_.size() * 2 * d);
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    for (int dir = 0; dir < 2 * d; ++dir) {
      neighbours_[i * 2 * d + dir] = static_cast<std::size_t>(index_.at(pack(step(sites_[i], dir))));
    }
  }
}

Domain Domain::box(int d, const Site& lo, const Site& hi) {
  std::vector<Site> sites;
  Site z = origin();
  Site l = origin(), h = origin();
  for (int a = 0; a < d; ++a) {
    if (hi[a] < lo[a]) throw std::invalid_argument("empty box");
    l[a] = lo[a];
    h[a] = hi[a];
  }
  for (z[2] = l[2]; z[2] <= h[2]; ++z[2])
    for (z[1] = l[1]; z[1] <= h[1]; ++z[1])
      for (z[0] = l[0]; z[0] <= h[0]; ++z[0]) sites.push_back(z);
  return Domain(d, std::move(sites));
}

Domain Domain::cube(int d, int r) {
  Site lo = origin(), hi = origin();
  for (int a = 0; a < d; ++a) {
    lo[a] = -r;
    hi[a] = r;
  }
  return box(d, lo, hi);
}

std::int64_t Domain::index_of(const Site& z) const {
  for (int a = d_; a < kMaxDim; ++a) {
    if (z[a] != 0) return -1;
  }
  auto it = index_.find(pack(z));
  return it == index_.end() ? -1 : it->second;
}

}  // namespace rwre
