#include "cutset/types_gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include "cutset/info_measures.hpp"
#include "cutset/rng.hpp"

namespace cutset {

Eigen::MatrixXd empirical_correlation(const Eigen::MatrixXd& x_seq, const Eigen::MatrixXd& y_seq) {
  if (x_seq.cols() != y_seq.cols() || x_seq.cols() < 1)
    throw std::invalid_argument("sequences must share a positive length");
  return (x_seq * y_seq.transpose()) / static_cast<double>(x_seq.cols());
}

GaussianTypeBlock gaussian_type(const Eigen::MatrixXd& x_seq, const Eigen::MatrixXd& y_seq) {
  if (x_seq.rows() != y_seq.rows())
    throw std::invalid_argument("gaussian type needs equally many components");
  const int n = static_cast<int>(x_seq.rows());
  GaussianTypeBlock out;
  out.m.resize(2 * n, 2 * n);
  out.m.topLeftCorner(n, n) = empirical_correlation(x_seq, x_seq);
  out.m.topRightCorner(n, n) = empirical_correlation(x_seq, y_seq);
  out.m.bottomLeftCorner(n, n) = out.m.topRightCorner(n, n).transpose();
  out.m.bottomRightCorner(n, n) = empirical_correlation(y_seq, y_seq);
  return out;
}

bool in_gamma(const Eigen::MatrixXd& a, const Eigen::MatrixXd& center, double delta) {
  if (a.rows() != center.rows() || a.cols() != center.cols())
    throw std::invalid_argument("in_gamma: shape mismatch");
  Eigen::MatrixXd d = a - center;
  return d.maxCoeff() <= delta && d.minCoeff() >= -delta;
}

bool typical_set_check(const GaussianTypeBlock& kb, double delta, const GaussianNetwork& net) {
  const int n = net.node_count();
  if (kb.n_nodes() != n) throw std::invalid_argument("type block does not match the network");
  const Eigen::MatrixXd& g = net.gain();
  Eigen::MatrixXd k11 = kb.xx(), k12 = kb.xy(), k21 = kb.yx(), k22 = kb.yy();

  // K11 in S(P): PSD within tolerance, diagonal within the power budget
  for (int i = 0; i < n; ++i)
    if (k11(i, i) > net.power()(i) + 1e-12) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k11);
  if (es.eigenvalues().minCoeff() < -1e-9) return false;

  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
  if (!in_gamma(k12 - k11 * g.transpose(), zero, delta)) return false;
  if (!in_gamma(k21 - g * k11, zero, delta)) return false;
  Eigen::MatrixXd resid = k22 + g * k11 * g.transpose() - g * k12 - k21 * g.transpose();
  return in_gamma(resid, net.noise_cov(), delta);
}

Eigen::MatrixXd quantize(const Eigen::MatrixXd& b, double delta_spacing) {
  if (delta_spacing <= 0.0) throw std::invalid_argument("quantizer spacing must be positive");
  return (b / delta_spacing).array().floor().matrix() * delta_spacing;
}

BigUint quantizer_count_bound(double delta_spacing, const Eigen::VectorXd& power) {
  if (delta_spacing <= 0.0) throw std::invalid_argument("quantizer spacing must be positive");
  BigUint out(1);
  for (int i = 0; i < power.size(); ++i)
    for (int j = 0; j < power.size(); ++j) {
      if (power(i) <= 0.0 || power(j) <= 0.0)
        throw std::invalid_argument("power must be positive");
      double v = 2.0 * std::sqrt(power(i) * power(j)) / delta_spacing;
      out *= static_cast<std::uint64_t>(std::ceil(v)) + 1;
    }
  return out;
}

Eigen::MatrixXd representative_type(const Eigen::MatrixXd& lattice_corner, double gamma) {
  Eigen::MatrixXd sym = 0.5 * (lattice_corner + lattice_corner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(gamma);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<double> input_quantizers_1d(double spacing, double gamma, double power) {
  if (spacing <= 0.0 || gamma <= 0.0 || power <= 0.0)
    throw std::invalid_argument("quantizer parameters must be positive");
  std::vector<double> corners;
  if (gamma > power) return corners;
  long long first = static_cast<long long>(std::floor(gamma / spacing));
  long long last = static_cast<long long>(std::floor(power / spacing));
  for (long long m = first; m <= last; ++m) corners.push_back(m * spacing);
  return corners;
}

bool inverse_in_gamma_bound(const Eigen::MatrixXd& k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  double k_min = es.eigenvalues().minCoeff();
  if (k_min <= 0.0) throw std::invalid_argument("inverse bound needs a PD matrix");
  Eigen::MatrixXd inv = k.inverse();
  double radius = static_cast<double>(k.rows()) / k_min;
  return in_gamma(inv, Eigen::MatrixXd::Zero(k.rows(), k.cols()), radius);
}

bool product_in_gamma_bound(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("product shape mismatch");
  double radius = static_cast<double>(a.cols()) * a.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff();
  Eigen::MatrixXd prod = a * b;
  return in_gamma(prod, Eigen::MatrixXd::Zero(prod.rows(), prod.cols()), radius);
}

double quadratic_mgf_gap(double t, const Eigen::MatrixXd& noise_cov, int i, int j) {
  // Z_i Z_j = z^t A z with eigenvalue representation through C^{1/2} A C^{1/2}
  Eigen::MatrixXd c, a;
  double mean;
  if (i == j) {
    c.resize(1, 1);
    c(0, 0) = noise_cov(i, i);
    a = Eigen::MatrixXd::Identity(1, 1);
    mean = noise_cov(i, i);
  } else {
    c.resize(2, 2);
    c << noise_cov(i, i), noise_cov(i, j), noise_cov(j, i), noise_cov(j, j);
    a.resize(2, 2);
    a << 0.0, 0.5, 0.5, 0.0;
    mean = noise_cov(i, j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esc(c);
  Eigen::MatrixXd half =
      esc.eigenvectors() * esc.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
      esc.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esm(half * a * half);
  double log_mgf = 0.0;
  for (int l = 0; l < esm.eigenvalues().size(); ++l) {
    double lam = esm.eigenvalues()(l);
    double arg = 1.0 - 2.0 * t * lam;
    if (arg <= 0.0) return std::numeric_limits<double>::infinity();
    log_mgf -= 0.5 * std::log(arg);
  }
  return log_mgf / t - mean;
}

double noise_tail_tau(double delta, const Eigen::MatrixXd& noise_cov) {
  if (delta <= 0.0) throw std::invalid_argument("tail constant needs delta > 0");
  const int n = static_cast<int>(noise_cov.rows());
  double t_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // critical t from the largest eigenvalue of the symmetrized coupling
      Eigen::MatrixXd c, a;
      if (i == j) {
        c = Eigen::MatrixXd::Constant(1, 1, noise_cov(i, i));
        a = Eigen::MatrixXd::Identity(1, 1);
      } else {
        c.resize(2, 2);
        c << noise_cov(i, i), noise_cov(i, j), noise_cov(j, i), noise_cov(j, j);
        a.resize(2, 2);
        a << 0.0, 0.5, 0.5, 0.0;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esc(c);
      Eigen::MatrixXd half =
          esc.eigenvectors() * esc.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
          esc.eigenvectors().transpose();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esm(half * a * half);
      double lam_max = esm.eigenvalues().maxCoeff();
      if (lam_max <= 0.0) throw std::logic_error("noise tail: nonpositive coupling spectrum");
      double t_crit = 1.0 / (2.0 * lam_max);
      double lo = 0.0, hi = t_crit * (1.0 - 1e-12);
      if (quadratic_mgf_gap(hi, noise_cov, i, j) <= delta / 2.0) {
        lo = hi;
      } else {
        for (int it = 0; it < 200 && hi - lo > 1e-14 * t_crit; ++it) {
          double mid = 0.5 * (lo + hi);
          if (quadratic_mgf_gap(mid, noise_cov, i, j) <= delta / 2.0)
            lo = mid;
          else
            hi = mid;
        }
      }
      if (lo <= 0.0) throw std::logic_error("noise tail: empty bisection domain");
      t_min = std::min(t_min, lo);
    }
  return delta / 4.0 * t_min;
}

double cross_tail_tau(double delta, const Eigen::MatrixXd& noise_cov,
                      const Eigen::VectorXd& power) {
  if (delta <= 0.0) throw std::invalid_argument("tail constant needs delta > 0");
  double worst = 0.0;
  for (int i = 0; i < power.size(); ++i)
    for (int j = 0; j < noise_cov.rows(); ++j)
      worst = std::max(worst, noise_cov(j, j) * power(i));
  return delta * delta / (4.0 * worst);
}

MartingaleEstimate mgf_martingale_check(const CausalPolicy& policy, double sigma2, double t,
                                        int block_len, long long trials, std::uint64_t seed) {
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  MartingaleEstimate out;
  out.trials = trials;
  double sum = 0.0, sum_sq = 0.0;
  double sigma = std::sqrt(sigma2);
  std::vector<double> noises(block_len);
  for (long long trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    double s = 0.0;
    for (int k = 0; k < block_len; ++k) {
      double x = policy(std::span<const double>(noises.data(), k));
      double z = sigma * rng.next_gaussian();
      noises[k] = z;
      s += t * x * z - 0.5 * t * t * sigma2 * x * x;
    }
    double v = std::exp(s);
    sum += v;
    sum_sq += v * v;
  }
  double n = static_cast<double>(trials);
  out.mean = sum / n;
  double var = std::max(sum_sq / n - out.mean * out.mean, 0.0);
  out.std_error = std::sqrt(var / n);
  return out;
}

GaussianProductBound gaussian_product_prob_bound(const GaussianNetwork& net, const Cut& T,
                                                 double delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  auto tc = T.complement_members();
  GaussianProductBound out;
  if (tc.empty()) {
    out.exponent = 0.0;
    out.vacuous = true;
    return out;
  }
  Eigen::MatrixXd sigma = submatrix(net.noise_cov(), tc, tc);
  double logdet = std::log(sigma.determinant());
  double d = static_cast<double>(tc.size());
  double n3 = std::pow(static_cast<double>(net.node_count()), 3.0);
  out.exponent = 0.5 * (d * std::log(2.0 * M_PI * std::exp(1.0)) + logdet) -
                 delta * n3 / (2.0 * net.sigma_min());
  out.vacuous = out.exponent <= 0.0;
  return out;
}

double log_product_marginal_density(const GaussianNetwork& net, const Cut& T,
                                    const Eigen::MatrixXd& x_seq, const Eigen::MatrixXd& y_seq) {
  auto tc = T.complement_members();
  if (x_seq.rows() != net.node_count() || y_seq.rows() != static_cast<long>(tc.size()) ||
      x_seq.cols() != y_seq.cols())
    throw std::invalid_argument("sequence shapes do not match the cut");
  double total = 0.0;
  for (int k = 0; k < x_seq.cols(); ++k)
    total += net.log_marginal_density(T, y_seq.col(k), x_seq.col(k));
  return total;
}

double gaussian_eta(double delta, int n_nodes, double sigma_min, double g_max, double p_max,
                    double p_min) {
  double nn = static_cast<double>(n_nodes);
  double n4 = nn * nn * nn * nn;
  return (delta * nn * nn / (2.0 * sigma_min)) *
         (delta * nn + (2.0 * nn * g_max + 1.0) * delta +
          2.0 * n4 * g_max * (1.0 + delta) * p_max / p_min + 1.0);
}

double gaussian_kappa(double delta, double delta_spacing, int n_nodes, double g_max, double p_max,
                      double p_min) {
  double nn = static_cast<double>(n_nodes);
  double n2 = nn * nn, n4 = n2 * n2;
  double gamma = delta * p_min;
  double load = n4 * g_max * (1.0 + delta) * p_max / gamma;
  return (2.0 * nn * g_max + 1.0) * delta * delta + n2 * g_max * g_max * delta_spacing +
         2.0 * load * (delta * delta + nn * g_max * delta_spacing) +
         delta_spacing * load * load;
}

double GaussianCertificate::kappa(double n) const {
  return gaussian_kappa(delta, 1.0 / n, n_nodes, g_max, p_max, p_min);
}

double GaussianCertificate::log_bound(double n) const {
  double n2 = static_cast<double>(n_nodes) * n_nodes;
  double a = -tau * n;
  double b = n2 * std::log(n) + n2 * std::log(2.0 * p_max + 1.0) - n * eta;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double GaussianCertificate::bound(double n) const {
  double lb = log_bound(n);
  return lb > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(lb);
}

double GaussianCertificate::smallest_useful_n() const {
  if (tau <= 0.0 || eta <= 0.0) return std::numeric_limits<double>::infinity();
  double hi = 2.0;
  while (log_bound(hi) >= 0.0 && hi < 1e17) hi *= 2.0;
  if (hi >= 1e17) return std::numeric_limits<double>::infinity();
  double lo = hi / 2.0;
  while (hi - lo > std::max(0.5, 1e-9 * hi)) {
    double mid = 0.5 * (lo + hi);
    if (log_bound(mid) < 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return std::ceil(hi);
}

GaussianCertificate gaussian_certificate(const GaussianNetwork& net, const RateMatrix& rates,
                                         const OptimizerConfig& cfg) {
  const int n = net.node_count();

  auto margin_at = [&](double delta) {
    GaussianNetwork enlarged(net.gain(), net.noise_cov(),
                             (1.0 + delta) * net.power());
    RateMatrix shrunk((1.0 - delta) * rates.rates());
    return region_margin(enlarged, shrunk, cfg).margin;
  };

  auto eta_of = [&](double delta) {
    return gaussian_eta(delta, n, net.sigma_min(), net.g_max(), net.p_max(), net.p_min());
  };
  auto feasible = [&](double delta) { return margin_at(delta) >= 2.0 * eta_of(delta); };

  if (region_margin(net, rates, cfg).margin <= cfg.tol)
    throw std::runtime_error("no certificate: rate inside Gaussian cut-set bound");

  double delta = 0.5;
  while (delta > 1e-9 && !feasible(delta)) delta *= 0.5;
  if (delta <= 1e-9) throw std::runtime_error("no certificate: no admissible delta found");
  {  // push delta up toward the feasibility boundary
    double lo = delta, hi = std::min(2.0 * delta, 0.5);
    for (int it = 0; it < 20 && hi - lo > 1e-3 * lo; ++it) {
      double mid = 0.5 * (lo + hi);
      if (feasible(mid))
        lo = mid;
      else
        hi = mid;
    }
    delta = lo;
  }

  GaussianCertificate cert;
  cert.delta = delta;
  cert.n_nodes = n;
  cert.sigma_min = net.sigma_min();
  cert.g_max = net.g_max();
  cert.p_min = net.p_min();
  cert.p_max = net.p_max();
  cert.gamma = delta * net.p_min();
  cert.eta = eta_of(delta);
  cert.margin_enlarged = margin_at(delta);
  cert.tau = std::min(noise_tail_tau(delta * delta, net.noise_cov()),
                      cross_tail_tau(delta * delta, net.noise_cov(), net.power()));

  // smallest n with delta^2 N^3 + N^2 kappa(delta, 1/n) <= 2 sigma_min eta;
  // kappa is affine in 1/n, and the slack at 1/n -> 0 equals delta N^2
  double kappa0 = gaussian_kappa(delta, 0.0, n, cert.g_max, cert.p_max, cert.p_min);
  double kappa_slope = gaussian_kappa(delta, 1.0, n, cert.g_max, cert.p_max, cert.p_min) - kappa0;
  double n2 = static_cast<double>(n) * n, n3 = n2 * n;
  double slack = 2.0 * cert.sigma_min * cert.eta - delta * delta * n3 - n2 * kappa0;
  cert.n_min_valid = slack > 0.0 ? std::ceil(n2 * kappa_slope / slack)
                                 : std::numeric_limits<double>::infinity();
  return cert;
}

GaussianCode append_redundant_slots(const GaussianCode& code, double delta,
                                    const Eigen::VectorXd& power) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  const int n_nodes = code.n_nodes;
  const int n_bar = code.block_len;
  const int n_new = n_bar + n_nodes;
  if (power.size() != n_nodes) throw std::invalid_argument("power vector length mismatch");

  // message-size condition: n R >= (n+N)(1-delta) R entrywise
  if (static_cast<double>(n_bar) < static_cast<double>(n_new) * (1.0 - delta))
    throw std::invalid_argument("blocklength too small for the redundant-slot transform");

  double p_min = power.minCoeff();
  double symbol = std::sqrt(delta * static_cast<double>(n_new) * p_min);

  GaussianCode out;
  out.n_nodes = n_nodes;
  out.block_len = n_new;
  out.power = (1.0 + delta) * power;
  out.family = code.family + "+redundant";
  out.msg_sizes.resize(n_nodes, n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    for (int j = 0; j < n_nodes; ++j) {
      double rate = std::log(static_cast<double>(code.msg_sizes(i, j))) / n_bar;
      out.msg_sizes(i, j) = message_size(n_new, (1.0 - delta) * rate);
      out.msg_sizes(i, j) = std::min(out.msg_sizes(i, j), code.msg_sizes(i, j));
    }

  auto base_encode = code.encode;
  out.encode = [base_encode, n_bar, n_new, symbol](int node, int k, const MessageRow& own,
                                                   std::span<const double> past) -> double {
    if (k <= n_bar) return base_encode(node, k, own, past.subspan(0, k - 1));
    // slot n_new + 1 - i (1-based) carries node i's redundant symbol
    int i = n_new - k + 1;
    return (i == node + 1) ? symbol : 0.0;
  };
  auto base_decode = code.decode;
  out.decode = [base_decode, n_bar](int node, const MessageRow& own,
                                    std::span<const double> y) {
    return base_decode(node, own, y.subspan(0, n_bar));
  };
  return out;
}

}  // namespace cutset
