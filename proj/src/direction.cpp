#include "rwre/direction.hpp"

#include <cstdlib>
#include <stdexcept>

namespace rwre {

std::string Direction::key() const {
  return (sign > 0 ? "+" : "-") + std::to_string(axis);
}

Direction Direction::from_key(const std::string& key) {
  if (key.size() < 2 || (key[0] != '+' && key[0] != '-')) {
    throw std::invalid_argument("bad direction key '" + key + "'");
  }
  char* end = nullptr;
  const long axis = std::strtol(key.c_str() + 1, &end, 10);
  if (*end != '\0' || axis < 1 || axis > kMaxDim) {
    throw std::invalid_argument("bad direction key '" + key + "'");
  }
  return {static_cast<int>(axis), key[0] == '+' ? 1 : -1};
}

std::vector<Direction> directions(int d) {
  std::vector<Direction> out;
  out.reserve(2 * d);
  for (int i = 0; i < 2 * d; ++i) out.push_back(Direction::from_index(i));
  return out;
}

Eigen::VectorXd unit_vector(int d, int index) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
  e(index / 2) = (index % 2 == 0) ? 1.0 : -1.0;
  return e;
}

Site make_site(std::initializer_list<std::int32_t> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDim)) {
    throw std::invalid_argument("site has more than kMaxDim coordinates");
  }
  Site z{0, 0, 0};
  std::size_t i = 0;
  for (auto c : coords) z[i++] = c;
  return z;
}

std::uint64_t pack(const Site& z) {
  std::uint64_t key = 0;
  for (int i = 0; i < kMaxDim; ++i) {
    if (z[i] <= -kCoordLimit || z[i] >= kCoordLimit) {
      throw std::out_of_range("lattice coordinate outside the packing box |z_i| < 2^20");
    }
    const auto biased = static_cast<std::uint64_t>(z[i] + kCoordLimit);
    key |= biased << (21 * i);
  }
  return key;
}

int l1_norm(const Site& z) {
  int n = 0;
  for (auto c : z) n += std::abs(c);
  return n;
}

std::string site_string(const Site& z, int d) {
  std::string s = "(";
  for (int i = 0; i < d; ++i) {
    if (i) s += ",";
    s += std::to_string(z[i]);
  }
  return s + ")";
}

}  // namespace rwre
