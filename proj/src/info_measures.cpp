#include "cutset/info_measures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cutset {

void JointPmf::validate() const {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("pmf entries must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("pmf does not sum to 1");
  if (static_cast<long long>(probs.size()) != size())
    throw std::invalid_argument("pmf length does not match its support");
}

double entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double entropy(const JointPmf& p) { return entropy(p.probs); }

KlResult kl_divergence_conditional(const std::vector<double>& s, const std::vector<double>& q,
                                   const std::vector<double>& r, int x_size, int y_size) {
  if (static_cast<int>(s.size()) != x_size * y_size ||
      static_cast<int>(q.size()) != x_size * y_size ||
      static_cast<int>(r.size()) != x_size)
    throw std::invalid_argument("kl: shape mismatch");
  KlResult out;
  for (int x = 0; x < x_size; ++x) {
    if (r[x] <= 0.0) continue;
    for (int y = 0; y < y_size; ++y) {
      double sv = s[x * y_size + y];
      if (sv <= 0.0) continue;
      double qv = q[x * y_size + y];
      if (qv <= 0.0) {
        out.absolutely_continuous = false;
        out.nats = std::numeric_limits<double>::infinity();
        return out;
      }
      out.nats += r[x] * sv * std::log(sv / qv);
    }
  }
  if (out.nats < 0.0 && out.nats > -1e-12) out.nats = 0.0;
  return out;
}

namespace {

// entropy of the marginal over a subset of axes (mask over axis indices)
double marginal_entropy(const JointPmf& joint, const std::vector<bool>& keep) {
  const auto& sizes = joint.support;
  long long kept = 1;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (keep[i]) kept *= sizes[i];
  std::vector<double> marg(kept, 0.0);

  MixedRadix radix{sizes};
  std::vector<int> digits(sizes.size(), 0);
  long long flat = 0;
  do {
    long long idx = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i)
      if (keep[i]) idx = idx * sizes[i] + digits[i];
    marg[idx] += joint.probs[flat];
    ++flat;
  } while (radix.next(digits));
  return entropy(marg);
}

}  // namespace

double conditional_mutual_information(const JointPmf& joint, const Cut& T) {
  const int n = T.n_nodes;
  const int axes = static_cast<int>(joint.support.size());
  if (axes < n) throw std::invalid_argument("joint has fewer axes than nodes");
  const int y_axes = axes - n;
  if (y_axes == 0) return 0.0;  // no outputs on the sink side

  std::vector<bool> x_all(axes, false), x_tc(axes, false), x_tc_y(axes, false), x_all_y(axes, true);
  for (int i = 0; i < n; ++i) {
    x_all[i] = true;
    if (!T.contains(i)) x_tc[i] = x_tc_y[i] = true;
  }
  for (int a = n; a < axes; ++a) x_tc_y[a] = true;

  // I = H(Y|X_{T^c}) - H(Y|X_I), written through joint entropies
  double h_xtc_y = marginal_entropy(joint, x_tc_y);
  double h_xtc = marginal_entropy(joint, x_tc);
  double h_xall_y = entropy(joint);
  double h_xall = marginal_entropy(joint, x_all);
  double value = (h_xtc_y - h_xtc) - (h_xall_y - h_xall);
  return value < 0.0 && value > -1e-12 ? 0.0 : value;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

double pinsker_radius(double xi) {
  if (xi < 0.0) throw std::invalid_argument("pinsker radius needs xi >= 0");
  return std::sqrt(2.0 * xi);
}

Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  double cutoff = 1e-10 * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inv = ev;
  for (int i = 0; i < ev.size(); ++i) inv(i) = ev(i) > cutoff ? 1.0 / ev(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

void validate_covariance(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("covariance must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("covariance must be positive semidefinite");
}

Eigen::MatrixXd schur_conditional_covariance(const Eigen::MatrixXd& k, const Cut& T) {
  if (k.rows() != T.n_nodes || k.cols() != T.n_nodes)
    throw std::invalid_argument("covariance dimension does not match the cut");
  auto t = T.members();
  auto tc = T.complement_members();
  Eigen::MatrixXd k_tt = submatrix(k, t, t);
  if (tc.empty()) return k_tt;
  Eigen::MatrixXd k_ttc = submatrix(k, t, tc);
  Eigen::MatrixXd k_tctc = submatrix(k, tc, tc);
  return k_tt - k_ttc * pseudo_inverse_psd(k_tctc) * k_ttc.transpose();
}

double gaussian_cut_value(const GaussianNetwork& net, const Eigen::MatrixXd& k, const Cut& T) {
  auto t = T.members();
  auto tc = T.complement_members();
  if (t.empty() || tc.empty()) return 0.0;

  Eigen::MatrixXd k_cond = schur_conditional_covariance(k, T);
  Eigen::MatrixXd g = submatrix(net.gain(), tc, t);
  Eigen::MatrixXd sigma = submatrix(net.noise_cov(), tc, tc);

  // Sigma^{-1/2} (Sigma + G K G^t) Sigma^{-1/2} keeps the argument symmetric PSD
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXd inv_sqrt = ev;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) <= 0.0) throw std::invalid_argument("noise covariance block not PD");
    inv_sqrt(i) = 1.0 / std::sqrt(ev(i));
  }
  Eigen::MatrixXd w = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  Eigen::MatrixXd m = w * (sigma + g * k_cond * g.transpose()) * w;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esm(m);
  double logdet = 0.0;
  for (int i = 0; i < esm.eigenvalues().size(); ++i)
    logdet += std::log(std::max(esm.eigenvalues()(i), 1.0));
  return 0.5 * logdet;
}

}  // namespace cutset
