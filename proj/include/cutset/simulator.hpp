#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cutset/codes.hpp"
#include "cutset/net_model.hpp"
#include "cutset/region.hpp"
#include "cutset/types_discrete.hpp"
#include "cutset/types_gaussian.hpp"

namespace cutset {

struct SimRow {
  std::string rate_id;
  std::string family;
  int block_len = 0;
  long long trials = 0;
  long long errors = 0;
  double eps_hat = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // Wilson 95%
  double bound = std::numeric_limits<double>::quiet_NaN();  // on 1 - eps_n
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;

  double std_error() const {
    if (trials == 0) return 0.0;
    return std::sqrt(eps_hat * (1.0 - eps_hat) / static_cast<double>(trials));
  }
};

struct SimReport {
  std::vector<SimRow> rows;
};

struct WilsonInterval {
  double lo = 0.0, hi = 0.0;
};
WilsonInterval wilson_interval(long long errors, long long trials);

SimRow run_dmn(const DiscreteNetwork& net, const DiscreteCode& code, long long trials,
               std::uint64_t seed);
SimRow run_gaussian(const GaussianNetwork& net, const GaussianCode& code, long long trials,
                    std::uint64_t seed);

// i.i.d. uniform codebook with exhaustive ML decoding at the receiver of a
// two-node one-way network (sender node 0, receiver node 1)
DiscreteCode random_code_ptp(const DiscreteNetwork& net, double rate_nats, int block_len,
                             std::uint64_t seed);
// single-bit repetition code with ML decoding
DiscreteCode repetition_code(const DiscreteNetwork& net, int block_len);

// one-bit antipodal signaling at peak power over the scalar link
GaussianCode antipodal_code(const GaussianNetwork& net, int block_len);
// i.i.d. Gaussian codebook scaled into the peak-power ball, ML decoding
GaussianCode gaussian_random_code(const GaussianNetwork& net, double rate_nats, int block_len,
                                  std::uint64_t seed);

// diagnostic: empirical covariance of the channel noise sampler
Eigen::MatrixXd sample_noise_covariance(const GaussianNetwork& net, long long draws,
                                        std::uint64_t seed);

// random-coding ensemble estimates: trials are split across independently
// drawn codebooks so the row estimates the ensemble error probability
SimRow run_random_ensemble(const DiscreteNetwork& net, double rate_nats, int block_len,
                           long long trials, std::uint64_t seed);
SimRow run_gaussian_random_ensemble(const GaussianNetwork& net, double rate_nats, int block_len,
                                    long long trials, std::uint64_t seed);

struct SweepSpec {
  std::vector<int> n_values;
  long long trials = 10000;
  std::uint64_t seed = 1;
  std::string family = "random";  // random | repetition | antipodal | gaussian-random
  std::string rate_id = "R0";
};

struct SweepResult {
  SimReport report;
  bool has_certificate = false;
  std::optional<DiscreteCertificate> discrete_cert;
  std::optional<GaussianCertificate> gaussian_cert;
};

SweepResult phase_transition_sweep(const DiscreteNetwork& net, const RateMatrix& rates,
                                   const SweepSpec& spec, const OptimizerConfig& cfg = {});
SweepResult phase_transition_sweep(const GaussianNetwork& net, const RateMatrix& rates,
                                   const SweepSpec& spec, const OptimizerConfig& cfg = {});

}  // namespace cutset
