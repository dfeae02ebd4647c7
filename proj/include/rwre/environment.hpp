#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "rwre/model.hpp"

namespace rwre {

/// SplitMix64 finalizer: a bijective 64-bit avalanche mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// Order-sensitive combination of two words into a fresh 64-bit stream key.
constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a + 0x9E3779B97F4A7C15ULL) ^ (b * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
}

/// Top 53 bits of a word as a double in [0,1).
constexpr double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

/// Counter-based uniform stream: the i-th draw is mix64(key, i).
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t key) : key_(key) {}
  double next() { return to_unit(mix64(key_, counter_++)); }
  [[nodiscard]] std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Atom index at site z under environment seed `seed`. Pure function of
/// (seed, z): u = to_unit(mix64(seed, pack(z))) fed to the inverse CDF of
/// the atom weights.
inline std::size_t sample_atom(const PerturbationLaw& nu, std::uint64_t seed, const Site& z) {
  return nu.select(to_unit(mix64(seed, pack(z))));
}

struct SiteEnvironment {
  Site z{};
  TransitionKernel kernel;
  std::size_t atom_index = 0;
};

/// omega^gamma(z,.) of the lazily sampled environment with master seed `seed`.
SiteEnvironment sample_site(const ModelSpec& model, double gamma, std::uint64_t seed, const Site& z);

/// An environment on Z^d: either the i.i.d. sampled environment of a model
/// or a homogeneous kernel, with a finite set of per-site overrides.
class EnvironmentView {
 public:
  static EnvironmentView sampled(const ModelSpec& model, double gamma, std::uint64_t seed);
  static EnvironmentView homogeneous(TransitionKernel kernel);

  [[nodiscard]] TransitionKernel kernel(const Site& z) const;
  [[nodiscard]] int dim() const { return d_; }

  /// Copy with the kernel at y replaced.
  [[nodiscard]] EnvironmentView with_override(const Site& y, TransitionKernel k) const;
  [[nodiscard]] const std::map<Site, TransitionKernel>& overrides() const { return overrides_; }

 private:
  int d_ = 0;
  std::optional<ModelSpec> model_;
  double gamma_ = 0.0;
  std::uint64_t seed_ = 0;
  TransitionKernel homogeneous_;
  std::map<Site, TransitionKernel> overrides_;
};

/// omega^{gamma,y}: the environment with the kernel at y replaced by p^gamma.
EnvironmentView one_point_modification(const ModelSpec& model, double gamma, const EnvironmentView& env,
                                       const Site& y);

/// p-tilde^gamma: the homogeneous environment p^gamma with the site 0
/// replaced by the kernel of the given atom.
EnvironmentView mean_with_sampled_origin(const ModelSpec& model, double gamma, std::size_t atom);

}  // namespace rwre
