#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

namespace cutset {

// Outgoing messages of one node: W_{i,j} for j in I, 0-based indices.
using MessageRow = std::vector<long long>;

using MsgSizeMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// message alphabet size ceil(e^{n R}) per the code definition
long long message_size(int block_len, double rate_nats);
MsgSizeMatrix message_sizes(int block_len, const Eigen::MatrixXd& rates);

// Block code over a discrete network. Causality is enforced by the interface:
// the encoder for slot k receives exactly the k-1 past outputs of its node.
struct DiscreteCode {
  int n_nodes = 0;
  int block_len = 0;
  MsgSizeMatrix msg_sizes;  // N x N
  std::function<int(int node, int k, const MessageRow& own, std::span<const int> past_y)> encode;
  std::function<std::vector<long long>(int node, const MessageRow& own, std::span<const int> y)>
      decode;  // returns estimates of W_{I x {node}}
  std::string family;
};

// Same shape over the reals, plus the declared peak power vector.
struct GaussianCode {
  int n_nodes = 0;
  int block_len = 0;
  MsgSizeMatrix msg_sizes;
  Eigen::VectorXd power;  // peak constraint (1/n) sum_k x_{i,k}^2 <= power(i)
  std::function<double(int node, int k, const MessageRow& own, std::span<const double> past_y)>
      encode;
  std::function<std::vector<long long>(int node, const MessageRow& own, std::span<const double> y)>
      decode;
  std::string family;
};

}  // namespace cutset
