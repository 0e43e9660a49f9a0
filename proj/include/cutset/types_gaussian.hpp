#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>

#include "cutset/bigint.hpp"
#include "cutset/codes.hpp"
#include "cutset/net_model.hpp"
#include "cutset/region.hpp"

namespace cutset {

// (1/n) sum_k x_k y_k^t for column-sequence matrices (rows = components).
Eigen::MatrixXd empirical_correlation(const Eigen::MatrixXd& x_seq, const Eigen::MatrixXd& y_seq);

// 2N x 2N block of empirical auto- and cross-correlations.
struct GaussianTypeBlock {
  Eigen::MatrixXd m;

  int n_nodes() const { return static_cast<int>(m.rows()) / 2; }
  Eigen::MatrixXd xx() const { return m.topLeftCorner(n_nodes(), n_nodes()); }
  Eigen::MatrixXd xy() const { return m.topRightCorner(n_nodes(), n_nodes()); }
  Eigen::MatrixXd yx() const { return m.bottomLeftCorner(n_nodes(), n_nodes()); }
  Eigen::MatrixXd yy() const { return m.bottomRightCorner(n_nodes(), n_nodes()); }
};

GaussianTypeBlock gaussian_type(const Eigen::MatrixXd& x_seq, const Eigen::MatrixXd& y_seq);

// closed entrywise neighborhood: every entry of a - center in [-delta, delta]
bool in_gamma(const Eigen::MatrixXd& a, const Eigen::MatrixXd& center, double delta);

// the four typicality conditions defining the typical set of Gaussian types
bool typical_set_check(const GaussianTypeBlock& kb, double delta, const GaussianNetwork& net);

// entrywise lattice floor: Delta * floor(B / Delta)
Eigen::MatrixXd quantize(const Eigen::MatrixXd& b, double delta_spacing);

// cardinality bound on the set of input quantizers whose cells meet S_gamma(P)
BigUint quantizer_count_bound(double delta_spacing, const Eigen::VectorXd& power);

// representative type of a Voronoi cell: corner clipped to eigenvalue floor gamma
Eigen::MatrixXd representative_type(const Eigen::MatrixXd& lattice_corner, double gamma);

// scalar case of the input-quantizer set: corners of the lattice cells
// [m*spacing, (m+1)*spacing) that meet the interval [gamma, power]
std::vector<double> input_quantizers_1d(double spacing, double gamma, double power);

// K^{-1} lies in Gamma_{N/lambda_min}(0) for PD K
bool inverse_in_gamma_bound(const Eigen::MatrixXd& k);
// A B lies in Gamma_{N2 amax bmax}(0)
bool product_in_gamma_bound(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Chernoff constant for the noise autocorrelation tail: (delta/4) min_{ij} t_ij
// with t_ij the largest t keeping the normalized log-MGF of Z_i Z_j within
// delta/2 of its mean.
double noise_tail_tau(double delta, const Eigen::MatrixXd& noise_cov);

// Chernoff constant for the input/noise cross-correlation tail:
// delta^2 / (4 max_{ij} sigma_j^2 P_i)
double cross_tail_tau(double delta, const Eigen::MatrixXd& noise_cov,
                      const Eigen::VectorXd& power);

// normalized log-MGF of Z_i Z_j minus its mean (exposed for oracle tests)
double quadratic_mgf_gap(double t, const Eigen::MatrixXd& noise_cov, int i, int j);

struct MartingaleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long trials = 0;
};

// Inputs may depend only on past noises; the policy sees exactly Z^{k-1}.
using CausalPolicy = std::function<double(std::span<const double> past_noises)>;

// Monte Carlo estimate of E[exp(t sum X_k Z_k - (t^2 sigma^2 / 2) sum X_k^2)],
// which equals 1 for every causal policy.
MartingaleEstimate mgf_martingale_check(const CausalPolicy& policy, double sigma2, double t,
                                        int block_len, long long trials, std::uint64_t seed);

struct GaussianProductBound {
  double exponent = 0.0;  // a_T: product density <= e^{-n a_T} on the type class
  bool vacuous = false;   // a_T <= 0
};

GaussianProductBound gaussian_product_prob_bound(const GaussianNetwork& net, const Cut& T,
                                                 double delta);

// direct evaluator of log prod_k q_{Y_{T^c}|X_I}(y_k | x_k) for validation
double log_product_marginal_density(const GaussianNetwork& net, const Cut& T,
                                    const Eigen::MatrixXd& x_seq, const Eigen::MatrixXd& y_seq);

double gaussian_eta(double delta, int n_nodes, double sigma_min, double g_max, double p_max,
                    double p_min);
double gaussian_kappa(double delta, double delta_spacing, int n_nodes, double g_max, double p_max,
                      double p_min);

struct GaussianCertificate {
  double delta = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  double margin_enlarged = 0.0;  // margin of (1-delta)R over S((1+delta)P)
  double gamma = 0.0;            // delta * P_min
  int n_nodes = 0;
  double sigma_min = 0.0, g_max = 0.0, p_min = 0.0, p_max = 0.0;
  double n_min_valid = 0.0;  // smallest n making the kappa/eta bookkeeping hold

  double kappa(double n) const;
  double log_bound(double n) const;  // log(e^{-tau n} + n^{N^2}(2P_max+1)^{N^2} e^{-n eta})
  double bound(double n) const;
  double smallest_useful_n() const;  // first n with bound < 1
};

GaussianCertificate gaussian_certificate(const GaussianNetwork& net, const RateMatrix& rates,
                                         const OptimizerConfig& cfg = {});

// Appends N slots in which node i alone sends sqrt(delta (n+N) P_min) in the
// i-th last slot; the result has strictly PD empirical autocorrelation and
// peak power (1+delta)P.
GaussianCode append_redundant_slots(const GaussianCode& code, double delta,
                                    const Eigen::VectorXd& power);

}  // namespace cutset
