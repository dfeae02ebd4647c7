#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rwre/direction.hpp"

namespace rwre {

/// Largest number of interior sites accepted by the finite-domain solvers.
inline constexpr std::size_t kMaxDomainSites = 4000;

/// A finite connected set U of lattice sites together with its outer
/// boundary dU = {z not in U : |z - x| = 1 for some x in U}.
///
/// Interior sites are numbered 0..|U|-1 in construction order, boundary
/// sites |U|..|U|+|dU|-1 in lexicographic order.
class Domain {
 public:
  /// Throws std::invalid_argument if sites is empty, has duplicates, or is
  /// not nearest-neighbour connected.
  Domain(int d, std::vector<Site> sites);

  /// Axis-aligned box prod_i [lo_i, hi_i].
  static Domain box(int d, const Site& lo, const Site& hi);

  /// Cube [-r, r]^d.
  static Domain cube(int d, int r);

  [[nodiscard]] int dim() const { return d_; }
  [[nodiscard]] std::size_t interior_size() const { return sites_.size(); }
  [[nodiscard]] std::size_t boundary_size() const { return boundary_.size(); }
  [[nodiscard]] std::size_t size() const { return sites_.size() + boundary_.size(); }

  [[nodiscard]] const std::vector<Site>& interior() const { return sites_; }
  [[nodiscard]] const std::vector<Site>& boundary() const { return boundary_; }

  /// Site with global index i (interior first, then boundary).
  [[nodiscard]] const Site& site(std::size_t i) const {
    return i < sites_.size() ? sites_[i] : boundary_[i - sites_.size()];
  }

  /// Global index of z, or -1 when z is outside U and dU.
  [[nodiscard]] std::int64_t index_of(const Site& z) const;
  [[nodiscard]] bool contains(const Site& z) const {
    const auto i = index_of(z);
    return i >= 0 && static_cast<std::size_t>(i) < sites_.size();
  }

  /// Global index of the neighbour z_i + e for interior site i (always in
  /// U or dU).
  [[nodiscard]] std::size_t neighbour(std::size_t i, int dir) const { return neighbours_[i * 2 * d_ + dir]; }

 private:
  int d_;
  std::vector<Site> sites_;
  std::vector<Site> boundary_;
  std::unordered_map<std::uint64_t, std::int64_t> index_;
  std::vector<std::size_t> neighbours_;
};

}  // namespace rwre
