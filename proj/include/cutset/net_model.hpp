#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cutset {

// A cut: the source-side subset T of the node set {0, ..., n-1}.
// Bit i of `mask` set means node i belongs to T.
struct Cut {
  std::uint32_t mask = 0;
  int n_nodes = 0;

  bool contains(int node) const { return (mask >> node) & 1u; }
  Cut complement() const {
    return Cut{static_cast<std::uint32_t>(~mask & ((1u << n_nodes) - 1u)), n_nodes};
  }
  int size() const { return __builtin_popcount(mask); }
  std::vector<int> members() const;
  std::vector<int> complement_members() const;
};

// Mixed-radix helpers for dense tensors indexed (x_1..x_N, y_1..y_N).
struct MixedRadix {
  std::vector<int> sizes;
  long long total() const {
    long long t = 1;
    for (int s : sizes) t *= s;
    return t;
  }
  long long index(const std::vector<int>& digits) const;
  void decode(long long index, std::vector<int>& digits) const;
  bool next(std::vector<int>& digits) const;  // odometer; false after wrap
};

// Finite-alphabet network: alphabets plus the dense transition tensor
// q(y_1..y_N | x_1..x_N), stored row-major with x digits leading.
class DiscreteNetwork {
 public:
  DiscreteNetwork(std::vector<int> input_sizes, std::vector<int> output_sizes,
                  std::vector<double> channel);

  int node_count() const { return static_cast<int>(input_sizes_.size()); }
  const std::vector<int>& input_sizes() const { return input_sizes_; }
  const std::vector<int>& output_sizes() const { return output_sizes_; }
  const std::vector<double>& channel() const { return channel_; }

  long long input_support() const;   // prod |X_i|
  long long output_support() const;  // prod |Y_i|

  // q(y_I | x_I) by flat indices
  double prob(long long x_index, long long y_index) const;

  static constexpr long long kMaxEntries = 10000000;  // desk-scale cap
  static constexpr double kSliceTol = 1e-12;

 private:
  std::vector<int> input_sizes_;
  std::vector<int> output_sizes_;
  std::vector<double> channel_;
};

// Conditional pmf q(y_S | x_I) for S = T^c, produced by marginalizing y_T out.
struct MarginalChannel {
  std::vector<int> input_sizes;     // all nodes
  std::vector<int> output_sizes;    // only nodes in T^c, ascending order
  std::vector<int> output_nodes;    // node ids matching output_sizes
  std::vector<double> probs;        // indexed (x_I, y_{T^c}) row-major

  long long input_support() const;
  long long output_support() const;
  double prob(long long x_index, long long y_index) const {
    return probs[x_index * output_support() + y_index];
  }
};

MarginalChannel marginalize_channel(const DiscreteNetwork& net, const Cut& T);

// Gaussian network Y = G X + Z, Z ~ N(0, Sigma), peak powers P.
class GaussianNetwork {
 public:
  GaussianNetwork(Eigen::MatrixXd gain, Eigen::MatrixXd noise_cov, Eigen::VectorXd power);

  int node_count() const { return static_cast<int>(power_.size()); }
  const Eigen::MatrixXd& gain() const { return gain_; }
  const Eigen::MatrixXd& noise_cov() const { return noise_cov_; }
  const Eigen::VectorXd& power() const { return power_; }

  double g_max() const { return g_max_; }
  double sigma_min() const { return sigma_min_; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }

  // log q_{Y_{T^c}|X_I}(y | x) for column vectors y (dim |T^c|), x (dim N)
  double log_marginal_density(const Cut& T, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd gain_;
  Eigen::MatrixXd noise_cov_;
  Eigen::VectorXd power_;
  double g_max_, sigma_min_, p_min_, p_max_;
};

// N x N nonnegative message rates in nats per channel use, zero diagonal.
class RateMatrix {
 public:
  explicit RateMatrix(Eigen::MatrixXd rates);

  int node_count() const { return static_cast<int>(rates_.rows()); }
  const Eigen::MatrixXd& rates() const { return rates_; }
  double operator()(int i, int j) const { return rates_(i, j); }

  // sum of R_{i,j} over (i,j) in T x T^c
  double cut_rate_sum(const Cut& T) const;

 private:
  Eigen::MatrixXd rates_;
};

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols);

// ---- spec-file ingestion ------------------------------------------------

enum class NetworkKind { Discrete, Gaussian };

struct LoadedNetwork {
  NetworkKind kind;
  std::shared_ptr<DiscreteNetwork> discrete;   // set when kind == Discrete
  std::shared_ptr<GaussianNetwork> gaussian;   // set when kind == Gaussian
};

LoadedNetwork load_network(const std::string& spec_text);
std::string serialize_network(const LoadedNetwork& net);

RateMatrix load_rates(const std::string& text, int n_nodes);
std::vector<double> load_dist(const std::string& text, long long support);
Eigen::MatrixXd load_cov(const std::string& text, int n_nodes);

}  // namespace cutset
