#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rwre {

/// Largest lattice dimension supported. Coordinates are packed 21 bits per
/// axis into a 64-bit key, which caps d at 3.
inline constexpr int kMaxDim = 3;

/// Coordinates must satisfy |z_i| < kCoordLimit.
inline constexpr std::int32_t kCoordLimit = 1 << 20;

/// A lattice point of Z^d; unused trailing axes are zero.
using Site = std::array<std::int32_t, kMaxDim>;

/// Unit step +-e_axis. Axes are 1-based to match the usual e_1..e_d labels.
///
/// Steps are indexed 0..2d-1 as index = 2*(axis-1) + (sign < 0), so the
/// storage order of every kernel vector is (+e1, -e1, +e2, -e2, ...).
struct Direction {
  int axis = 1;
  int sign = 1;

  [[nodiscard]] int index() const { return 2 * (axis - 1) + (sign < 0 ? 1 : 0); }
  [[nodiscard]] Direction operator-() const { return {axis, -sign}; }
  bool operator==(const Direction&) const = default;

  static Direction from_index(int index) { return {index / 2 + 1, index % 2 == 0 ? 1 : -1}; }

  /// "+1" for e1, "-2" for -e2.
  [[nodiscard]] std::string key() const;
  static Direction from_key(const std::string& key);
};

inline int num_directions(int d) { return 2 * d; }

/// All 2d directions in index order.
std::vector<Direction> directions(int d);

/// Index of -e given the index of e.
inline int opposite(int index) { return index ^ 1; }

/// The unit vector e as a real vector of length d.
Eigen::VectorXd unit_vector(int d, int index);

inline Site step(const Site& z, int index) {
  Site out = z;
  out[index / 2] += (index % 2 == 0) ? 1 : -1;
  return out;
}

inline Site origin() { return Site{0, 0, 0}; }

Site make_site(std::initializer_list<std::int32_t> coords);

/// Packs z into 64 bits (21 bits per axis, offset by kCoordLimit).
/// Throws std::out_of_range if any |z_i| >= kCoordLimit.
std::uint64_t pack(const Site& z);

/// L1 norm |z|_1 over all axes.
int l1_norm(const Site& z);

std::string site_string(const Site& z, int d);

}  // namespace rwre
