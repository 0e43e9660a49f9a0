#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cutset/net_model.hpp"

namespace cutset {

// Joint pmf over a mixed-radix support. probs sums to 1 within 1e-12.
struct JointPmf {
  std::vector<int> support;
  std::vector<double> probs;

  long long size() const {
    long long t = 1;
    for (int s : support) t *= s;
    return t;
  }
  void validate() const;
};

struct KlResult {
  double nats = 0.0;
  bool absolutely_continuous = true;  // false => nats is +inf sentinel
};

// -sum p log p, natural log, 0 log 0 := 0
double entropy(const JointPmf& p);
double entropy(const std::vector<double>& probs);

// D(s || q | r) = sum_x r(x) sum_y s(y|x) log(s/q).
// s, q are row-stochastic (x-major) over y_size columns; r over x_size.
KlResult kl_divergence_conditional(const std::vector<double>& s, const std::vector<double>& q,
                                   const std::vector<double>& r, int x_size, int y_size);

// I(X_T; Y_{T^c} | X_{T^c}) for a joint over (X_1..X_N, Y_{T^c}).
// The first T.n_nodes axes of `joint` are the X components; the rest are Y.
double conditional_mutual_information(const JointPmf& joint, const Cut& T);

// L1 distance between equal-support pmfs.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

// Pinsker radius: KL ball of radius xi maps into the L1 ball of radius sqrt(2 xi).
double pinsker_radius(double xi);

// Conditional covariance of X_T given X_{T^c} under N(0, K); generalized
// inverse handles singular K_{T^c x T^c}.
Eigen::MatrixXd schur_conditional_covariance(const Eigen::MatrixXd& k, const Cut& T);

// Cut term of the Gaussian region:
// (1/2) log det(I + G_{T^c x T} K_{T|T^c} G^t Sigma_{T^c x T^c}^{-1}),
// evaluated through a symmetrized determinant.
double gaussian_cut_value(const GaussianNetwork& net, const Eigen::MatrixXd& k, const Cut& T);

Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& m);

// symmetric within 1e-12, eigenvalues above -1e-9
void validate_covariance(const Eigen::MatrixXd& m);

}  // namespace cutset
