#include "cutset/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "cutset/rng.hpp"

namespace cutset {

long long message_size(int block_len, double rate_nats) {
  if (rate_nats <= 0.0) return 1;
  if (block_len * rate_nats > 42.0)
    throw std::invalid_argument("message alphabet exceeds the enumeration range");
  double v = std::exp(block_len * rate_nats);
  // guard against ceil() lifting an exactly-representable integer
  return static_cast<long long>(std::ceil(v - 1e-9 * v));
}

MsgSizeMatrix message_sizes(int block_len, const Eigen::MatrixXd& rates) {
  MsgSizeMatrix out(rates.rows(), rates.cols());
  for (int i = 0; i < rates.rows(); ++i)
    for (int j = 0; j < rates.cols(); ++j) out(i, j) = message_size(block_len, rates(i, j));
  return out;
}

WilsonInterval wilson_interval(long long errors, long long trials) {
  WilsonInterval w;
  if (trials == 0) return w;
  const double z = 1.959963985;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(errors) / n;
  double denom = 1.0 + z * z / n;
  double center = (p + z * z / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

namespace {

constexpr double kPowerTol = 1e-9;

long long count_errors_parallel(long long trials,
                                const std::function<bool(long long)>& trial_errs) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (trials < 4096) workers = 1;
  std::vector<std::future<long long>> futures;
  long long chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    long long lo = w * chunk, hi = std::min<long long>(trials, lo + chunk);
    if (lo >= hi) break;
    futures.push_back(std::async(std::launch::async, [lo, hi, &trial_errs] {
      long long errs = 0;
      for (long long t = lo; t < hi; ++t) errs += trial_errs(t) ? 1 : 0;
      return errs;
    }));
  }
  long long errors = 0;
  for (auto& f : futures) errors += f.get();  // integer sum: order-independent
  return errors;
}

void draw_messages(const MsgSizeMatrix& sizes, CounterRng& rng,
                   std::vector<MessageRow>& w) {
  const int n = static_cast<int>(sizes.rows());
  w.assign(n, MessageRow(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (sizes(i, j) > 1) w[i][j] = static_cast<long long>(rng.next_below(sizes(i, j)));
}

bool decode_and_compare(int n_nodes, const DiscreteCode& code,
                        const std::vector<MessageRow>& w,
                        const std::vector<std::vector<int>>& y_hist) {
  for (int i = 0; i < n_nodes; ++i) {
    std::vector<long long> est =
        code.decode(i, w[i], std::span<const int>(y_hist[i].data(), y_hist[i].size()));
    for (int j = 0; j < n_nodes; ++j)
      if (est[j] != w[j][i]) return true;
  }
  return false;
}

}  // namespace

SimRow run_dmn(const DiscreteNetwork& net, const DiscreteCode& code, long long trials,
               std::uint64_t seed) {
  if (code.n_nodes != net.node_count())
    throw std::invalid_argument("code and network node counts differ");
  const int n_nodes = net.node_count();
  const int n = code.block_len;
  const long long xs = net.input_support();
  const long long ys = net.output_support();

  // per-input cumulative rows for channel sampling
  std::vector<double> cdf(xs * ys);
  for (long long x = 0; x < xs; ++x) {
    double acc = 0.0;
    for (long long y = 0; y < ys; ++y) {
      acc += net.prob(x, y);
      cdf[x * ys + y] = acc;
    }
    cdf[x * ys + ys - 1] = 1.0;
  }
  // flat output index -> per-node symbols
  std::vector<int> y_symbols(ys * n_nodes);
  {
    MixedRadix radix{net.output_sizes()};
    std::vector<int> digits(n_nodes, 0);
    long long y = 0;
    do {
      for (int i = 0; i < n_nodes; ++i) y_symbols[y * n_nodes + i] = digits[i];
      ++y;
    } while (radix.next(digits));
  }
  MixedRadix x_radix{net.input_sizes()};

  auto start = std::chrono::steady_clock::now();
  auto trial_errs = [&](long long trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    std::vector<MessageRow> w;
    draw_messages(code.msg_sizes, rng, w);
    std::vector<std::vector<int>> y_hist(n_nodes);
    for (auto& h : y_hist) h.reserve(n);
    std::vector<int> x_digits(n_nodes);
    for (int k = 1; k <= n; ++k) {
      for (int i = 0; i < n_nodes; ++i) {
        int sym = code.encode(i, k, w[i], std::span<const int>(y_hist[i].data(), k - 1));
        if (sym < 0 || sym >= net.input_sizes()[i])
          throw std::out_of_range("encoder emitted a symbol outside the alphabet");
        x_digits[i] = sym;
      }
      long long x = x_radix.index(x_digits);
      double u = rng.next_unit();
      const double* row = cdf.data() + x * ys;
      long long y = std::lower_bound(row, row + ys, u) - row;
      if (y >= ys) y = ys - 1;
      for (int i = 0; i < n_nodes; ++i) y_hist[i].push_back(y_symbols[y * n_nodes + i]);
    }
    return decode_and_compare(n_nodes, code, w, y_hist);
  };

  SimRow row;
  row.family = code.family;
  row.block_len = n;
  row.trials = trials;
  row.seed = seed;
  row.errors = trials > 0 ? count_errors_parallel(trials, trial_errs) : 0;
  row.eps_hat = trials > 0 ? static_cast<double>(row.errors) / trials : 0.0;
  auto ci = wilson_interval(row.errors, trials);
  row.ci_lo = ci.lo;
  row.ci_hi = ci.hi;
  row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

SimRow run_gaussian(const GaussianNetwork& net, const GaussianCode& code, long long trials,
                    std::uint64_t seed) {
  if (code.n_nodes != net.node_count())
    throw std::invalid_argument("code and network node counts differ");
  const int n_nodes = net.node_count();
  const int n = code.block_len;
  Eigen::LLT<Eigen::MatrixXd> llt(net.noise_cov());
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("noise covariance is not positive definite");
  Eigen::MatrixXd chol = llt.matrixL();
  Eigen::VectorXd budget = code.power;
  if (budget.size() == 0) budget = net.power();

  auto start = std::chrono::steady_clock::now();
  auto trial_errs = [&](long long trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    std::vector<MessageRow> w;
    draw_messages(code.msg_sizes, rng, w);
    std::vector<std::vector<double>> y_hist(n_nodes);
    for (auto& h : y_hist) h.reserve(n);
    Eigen::VectorXd x(n_nodes), z(n_nodes), y(n_nodes);
    Eigen::VectorXd energy = Eigen::VectorXd::Zero(n_nodes);
    for (int k = 1; k <= n; ++k) {
      for (int i = 0; i < n_nodes; ++i) {
        x(i) = code.encode(i, k, w[i], std::span<const double>(y_hist[i].data(), k - 1));
        energy(i) += x(i) * x(i);
      }
      for (int i = 0; i < n_nodes; ++i) z(i) = rng.next_gaussian();
      y = net.gain() * x + chol * z;
      for (int i = 0; i < n_nodes; ++i) y_hist[i].push_back(y(i));
    }
    for (int i = 0; i < n_nodes; ++i)
      if (energy(i) / n > budget(i) + kPowerTol)
        throw std::runtime_error("peak power violated at node " + std::to_string(i + 1) +
                                 ": (1/n) sum x^2 = " + std::to_string(energy(i) / n) +
                                 " > " + std::to_string(budget(i)));
    for (int i = 0; i < n_nodes; ++i) {
      std::vector<long long> est =
          code.decode(i, w[i], std::span<const double>(y_hist[i].data(), y_hist[i].size()));
      for (int j = 0; j < n_nodes; ++j)
        if (est[j] != w[j][i]) return true;
    }
    return false;
  };

  SimRow row;
  row.family = code.family;
  row.block_len = n;
  row.trials = trials;
  row.seed = seed;
  row.errors = trials > 0 ? count_errors_parallel(trials, trial_errs) : 0;
  row.eps_hat = trials > 0 ? static_cast<double>(row.errors) / trials : 0.0;
  auto ci = wilson_interval(row.errors, trials);
  row.ci_lo = ci.lo;
  row.ci_hi = ci.hi;
  row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

namespace {

void require_two_node_oneway(int n_nodes) {
  if (n_nodes != 2)
    throw std::invalid_argument("point-to-point code families need a two-node network");
}

// shared ML machinery over an explicit sender codebook
DiscreteCode ml_codebook_code(const DiscreteNetwork& net, std::vector<std::vector<int>> codebook,
                              int block_len, const std::string& family) {
  require_two_node_oneway(net.node_count());
  const long long m = static_cast<long long>(codebook.size());

  // log q(y_1 | x_0, x_1 = 0): marginal channel toward the receiver
  MarginalChannel mc = marginalize_channel(net, Cut{0b01, 2});
  const long long ys = mc.output_support();
  const int x1_size = net.input_sizes()[1];
  std::vector<double> log_q(net.input_sizes()[0] * ys);
  for (int x0 = 0; x0 < net.input_sizes()[0]; ++x0)
    for (long long y = 0; y < ys; ++y) {
      double p = mc.prob(static_cast<long long>(x0) * x1_size, y);
      log_q[x0 * ys + y] = p > 0.0 ? std::log(p) : -1e30;
    }

  DiscreteCode code;
  code.n_nodes = 2;
  code.block_len = block_len;
  code.family = family;
  code.msg_sizes.setOnes(2, 2);
  code.msg_sizes(0, 1) = m;
  auto book = std::make_shared<std::vector<std::vector<int>>>(std::move(codebook));
  code.encode = [book](int node, int k, const MessageRow& own, std::span<const int>) -> int {
    if (node != 0) return 0;
    return (*book)[own[1]][k - 1];
  };
  auto logq = std::make_shared<std::vector<double>>(std::move(log_q));
  code.decode = [book, logq, ys, m](int node, const MessageRow&,
                                    std::span<const int> y) -> std::vector<long long> {
    std::vector<long long> est(2, 0);
    if (node != 1) return est;
    double best = -1e300;
    long long arg = 0;
    for (long long cand = 0; cand < m; ++cand) {
      double ll = 0.0;
      const auto& word = (*book)[cand];
      for (std::size_t k = 0; k < y.size(); ++k) ll += (*logq)[word[k] * ys + y[k]];
      if (ll > best) {  // strict: ties resolve to the lowest index
        best = ll;
        arg = cand;
      }
    }
    est[0] = arg;
    return est;
  };
  return code;
}

}  // namespace

DiscreteCode random_code_ptp(const DiscreteNetwork& net, double rate_nats, int block_len,
                             std::uint64_t seed) {
  require_two_node_oneway(net.node_count());
  long long m = message_size(block_len, rate_nats);
  double enumeration = static_cast<double>(m) * std::pow(net.input_sizes()[0], block_len);
  if (enumeration > 1e8)
    throw std::invalid_argument("codebook enumeration cap exceeded");
  std::vector<std::vector<int>> book(m, std::vector<int>(block_len));
  for (long long w = 0; w < m; ++w) {
    CounterRng rng(seed ^ 0xc0de, static_cast<std::uint64_t>(w));
    for (int k = 0; k < block_len; ++k)
      book[w][k] = static_cast<int>(rng.next_below(net.input_sizes()[0]));
  }
  return ml_codebook_code(net, std::move(book), block_len, "random");
}

DiscreteCode repetition_code(const DiscreteNetwork& net, int block_len) {
  require_two_node_oneway(net.node_count());
  if (net.input_sizes()[0] < 2)
    throw std::invalid_argument("repetition code needs a binary sender alphabet");
  std::vector<std::vector<int>> book{std::vector<int>(block_len, 0),
                                     std::vector<int>(block_len, 1)};
  return ml_codebook_code(net, std::move(book), block_len, "repetition");
}

namespace {

GaussianCode gaussian_ml_code(const GaussianNetwork& net,
                              std::vector<std::vector<double>> codebook, int block_len,
                              const std::string& family) {
  require_two_node_oneway(net.node_count());
  const long long m = static_cast<long long>(codebook.size());
  double g_eff = net.gain()(1, 0);

  GaussianCode code;
  code.n_nodes = 2;
  code.block_len = block_len;
  code.family = family;
  code.power = net.power();
  code.msg_sizes.setOnes(2, 2);
  code.msg_sizes(0, 1) = m;
  auto book = std::make_shared<std::vector<std::vector<double>>>(std::move(codebook));
  code.encode = [book](int node, int k, const MessageRow& own,
                       std::span<const double>) -> double {
    if (node != 0) return 0.0;
    return (*book)[own[1]][k - 1];
  };
  code.decode = [book, g_eff, m](int node, const MessageRow&,
                                 std::span<const double> y) -> std::vector<long long> {
    std::vector<long long> est(2, 0);
    if (node != 1) return est;
    double best = 1e300;
    long long arg = 0;
    for (long long cand = 0; cand < m; ++cand) {
      double dist = 0.0;
      const auto& word = (*book)[cand];
      for (std::size_t k = 0; k < y.size(); ++k) {
        double d = y[k] - g_eff * word[k];
        dist += d * d;
      }
      if (dist < best) {
        best = dist;
        arg = cand;
      }
    }
    est[0] = arg;
    return est;
  };
  return code;
}

}  // namespace

GaussianCode antipodal_code(const GaussianNetwork& net, int block_len) {
  double amp = std::sqrt(net.power()(0));
  std::vector<std::vector<double>> book{std::vector<double>(block_len, amp),
                                        std::vector<double>(block_len, -amp)};
  return gaussian_ml_code(net, std::move(book), block_len, "antipodal");
}

GaussianCode gaussian_random_code(const GaussianNetwork& net, double rate_nats, int block_len,
                                  std::uint64_t seed) {
  long long m = message_size(block_len, rate_nats);
  if (m > 1000000) throw std::invalid_argument("codebook enumeration cap exceeded");
  double p0 = net.power()(0);
  std::vector<std::vector<double>> book(m, std::vector<double>(block_len));
  for (long long w = 0; w < m; ++w) {
    CounterRng rng(seed ^ 0x6a55, static_cast<std::uint64_t>(w));
    double energy = 0.0;
    for (int k = 0; k < block_len; ++k) {
      book[w][k] = rng.next_gaussian() * std::sqrt(0.9 * p0);
      energy += book[w][k] * book[w][k];
    }
    if (energy / block_len > p0) {  // project into the peak-power ball
      double scale = std::sqrt(p0 * block_len / energy);
      for (auto& v : book[w]) v *= scale;
    }
  }
  return gaussian_ml_code(net, std::move(book), block_len, "gaussian-random");
}

namespace {

// aggregate rows from per-codebook runs into one ensemble row
template <typename RunOne>
SimRow aggregate_codebooks(int block_len, long long trials, std::uint64_t seed,
                           const std::string& family, RunOne&& run_one) {
  long long books = std::max<long long>(1, std::min<long long>(50, trials / 2000));
  long long per = trials / books;
  auto start = std::chrono::steady_clock::now();
  SimRow row;
  row.family = family;
  row.block_len = block_len;
  row.seed = seed;
  for (long long b = 0; b < books; ++b) {
    long long quota = per + (b < trials % books ? 1 : 0);
    if (quota == 0) continue;
    SimRow part = run_one(b, quota);
    row.trials += part.trials;
    row.errors += part.errors;
  }
  row.eps_hat = row.trials > 0 ? static_cast<double>(row.errors) / row.trials : 0.0;
  auto ci = wilson_interval(row.errors, row.trials);
  row.ci_lo = ci.lo;
  row.ci_hi = ci.hi;
  row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

SimRow run_random_ensemble(const DiscreteNetwork& net, double rate_nats, int block_len,
                           long long trials, std::uint64_t seed) {
  return aggregate_codebooks(block_len, trials, seed, "random", [&](long long b, long long quota) {
    DiscreteCode code = random_code_ptp(net, rate_nats, block_len, seed * 1000003ULL + b);
    return run_dmn(net, code, quota, seed + 0x51ULL * b);
  });
}

SimRow run_gaussian_random_ensemble(const GaussianNetwork& net, double rate_nats, int block_len,
                                    long long trials, std::uint64_t seed) {
  return aggregate_codebooks(
      block_len, trials, seed, "gaussian-random", [&](long long b, long long quota) {
        GaussianCode code = gaussian_random_code(net, rate_nats, block_len, seed * 1000003ULL + b);
        return run_gaussian(net, code, quota, seed + 0x51ULL * b);
      });
}

Eigen::MatrixXd sample_noise_covariance(const GaussianNetwork& net, long long draws,
                                        std::uint64_t seed) {
  const int n = net.node_count();
  Eigen::LLT<Eigen::MatrixXd> llt(net.noise_cov());
  Eigen::MatrixXd chol = llt.matrixL();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd g(n);
  for (long long t = 0; t < draws; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    for (int i = 0; i < n; ++i) g(i) = rng.next_gaussian();
    Eigen::VectorXd z = chol * g;
    acc += z * z.transpose();
  }
  return acc / static_cast<double>(draws);
}

namespace {

template <typename Cert>
void attach_bound(SimRow& row, const Cert& cert) {
  row.bound = cert.bound(static_cast<double>(row.block_len));
}

}  // namespace

SweepResult phase_transition_sweep(const DiscreteNetwork& net, const RateMatrix& rates,
                                   const SweepSpec& spec, const OptimizerConfig& cfg) {
  SweepResult out;
  try {
    out.discrete_cert = discrete_certificate(net, rates, cfg);
    out.has_certificate = true;
  } catch (const std::runtime_error&) {
    out.has_certificate = false;
  }
  double rate = rates.node_count() == 2 ? rates(0, 1) : 0.0;
  for (int n : spec.n_values) {
    if (spec.trials == 0) continue;
    SimRow row = spec.family == "repetition"
                     ? run_dmn(net, repetition_code(net, n), spec.trials, spec.seed)
                     : run_random_ensemble(net, rate, n, spec.trials, spec.seed + n);
    row.rate_id = spec.rate_id;
    if (out.has_certificate) attach_bound(row, *out.discrete_cert);
    out.report.rows.push_back(std::move(row));
  }
  return out;
}

SweepResult phase_transition_sweep(const GaussianNetwork& net, const RateMatrix& rates,
                                   const SweepSpec& spec, const OptimizerConfig& cfg) {
  SweepResult out;
  try {
    out.gaussian_cert = gaussian_certificate(net, rates, cfg);
    out.has_certificate = true;
  } catch (const std::runtime_error&) {
    out.has_certificate = false;
  }
  double rate = rates.node_count() == 2 ? rates(0, 1) : 0.0;
  for (int n : spec.n_values) {
    if (spec.trials == 0) continue;
    SimRow row = spec.family == "antipodal"
                     ? run_gaussian(net, antipodal_code(net, n), spec.trials, spec.seed)
                     : run_gaussian_random_ensemble(net, rate, n, spec.trials, spec.seed + n);
    row.rate_id = spec.rate_id;
    if (out.has_certificate) attach_bound(row, *out.gaussian_cert);
    out.report.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace cutset
