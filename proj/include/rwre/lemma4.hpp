#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "rwre/kernel.hpp"

namespace rwre {

struct Lemma4Options {
  /// Mass allowed outside the truncated box: the box radius is
  /// ceil(sqrt(2 N log(2d/eps))) for N steps (Hoeffding), capped at N.
  double truncation_eps = 1e-13;
  /// Bytes available for the two slices.
  std::size_t memory_budget = std::size_t{1} << 30;
  /// Sum only over sites with the parity of n+1 (the other terms vanish).
  bool parity_only = false;
  /// Smallest n used in the fit; 0 uses every row.
  long fit_n_min = 0;
};

/// L1 distances sum_z |p_{n+1}(0,z) - p_n(e,z)| for each requested n (rows)
/// and step e (columns).
struct DecayTable {
  std::vector<long> n;
  std::vector<int> directions;
  Eigen::MatrixXd l1;
  double fitted_exponent = 0.0;  ///< log-log slope of the largest row entry
  double max_mass_defect = 0.0;  ///< max over recorded n of |1 - sum_z p_{n+1}(0,z)|
  int radius = 0;                ///< truncation radius of the box
};

/// Throws std::invalid_argument when s is not symmetric or n_list is empty
/// or unsorted, and std::length_error when the slices exceed the memory
/// budget.
DecayTable lemma4_decay(const TransitionKernel& s, const std::vector<long>& n_list, const std::vector<int>& directions,
                        const Lemma4Options& opt = {});

/// p_n(0, .) of the stationary walk on the box [-r, r]^d, axis 0 fastest
/// (no truncation beyond the box). For tests and small n.
std::vector<double> walk_law(const TransitionKernel& p, long n, int r);

}  // namespace rwre
