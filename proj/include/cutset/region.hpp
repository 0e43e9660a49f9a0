#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "cutset/info_measures.hpp"
#include "cutset/net_model.hpp"

namespace cutset {

struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 300;
  double tol = 1e-6;            // margin at or below tol counts as inside
  double grid_step = 1e-3;      // certification grid resolution
  long long grid_point_cap = 2000000;
  std::uint64_t seed = 1;
};

// Signed margin, positive = outside. The minimum runs over all witnesses,
// the maximum over all 2^N cuts; empty and full cuts pin the margin at >= 0.
struct MembershipVerdict {
  bool inside = false;
  bool certified = false;       // inside verdicts carry their witness;
                                // outside ones need the certification grid
  double margin = 0.0;
  std::uint32_t worst_cut = 0;  // lowest mask among ties
  std::vector<double> witness_pmf;  // discrete networks
  Eigen::MatrixXd witness_cov;      // gaussian networks
  bool grid_ran = false;
  double grid_step_used = 0.0;
};

struct RegionAnalysis {
  MembershipVerdict cutset;  // union over witnesses of intersection over cuts
  MembershipVerdict outer;   // intersection over cuts of union over witnesses
};

// I(X_T; Y_{T^c} | X_{T^c}) under p(x_I) q(y_{T^c}|x_I), by composition of
// marginalize_channel and conditional_mutual_information.
double cut_value_discrete(const DiscreteNetwork& net, const std::vector<double>& p,
                          const Cut& T);

// All 2^N cut values at once (fast path shared with the optimizer).
std::vector<double> all_cut_values(const DiscreteNetwork& net, const std::vector<double>& p);
std::vector<double> all_cut_values(const GaussianNetwork& net, const Eigen::MatrixXd& k);

RegionAnalysis analyze_region(const DiscreteNetwork& net, const RateMatrix& rates,
                              const OptimizerConfig& cfg = {});
RegionAnalysis analyze_region(const GaussianNetwork& net, const RateMatrix& rates,
                              const OptimizerConfig& cfg = {});

MembershipVerdict region_margin(const DiscreteNetwork& net, const RateMatrix& rates,
                                const OptimizerConfig& cfg = {});
MembershipVerdict region_margin(const GaussianNetwork& net, const RateMatrix& rates,
                                const OptimizerConfig& cfg = {});
MembershipVerdict outer_region_margin(const DiscreteNetwork& net, const RateMatrix& rates,
                                      const OptimizerConfig& cfg = {});
MembershipVerdict outer_region_margin(const GaussianNetwork& net, const RateMatrix& rates,
                                      const OptimizerConfig& cfg = {});

}  // namespace cutset
