// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its stated tolerance and runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cutset/report.hpp"
#include "cutset/rng.hpp"
#include "cutset/simulator.hpp"

using namespace cutset;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<bool(std::string&)> run;
};

DiscreteNetwork bsc_net(double flip) {
  return DiscreteNetwork({2, 1}, {1, 2}, {1.0 - flip, flip, flip, 1.0 - flip});
}

GaussianNetwork scalar_link() {
  Eigen::MatrixXd g(2, 2), sigma(2, 2);
  g << 0, 0, 1, 0;
  sigma << 1, 0, 0, 1;
  Eigen::VectorXd p(2);
  p << 1, 1;
  return GaussianNetwork(g, sigma, p);
}

RateMatrix rates2(double r01) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2, 2);
  r(0, 1) = r01;
  return RateMatrix(r);
}

// ---- 1: discrete cut values against the joint-summation oracle -----------

bool crit_discrete_cut(std::string& detail) {
  DiscreteNetwork net = bsc_net(0.1);
  std::vector<double> p{0.5, 0.5};
  double via_lib = cut_value_discrete(net, p, Cut{0b01, 2});

  // oracle: assemble the full joint and sum I = sum mu log(mu mu_c / (mu_a mu_b))
  double q[2][2] = {{0.9, 0.1}, {0.1, 0.9}};
  double joint[2][2];
  double mu_x[2] = {0, 0}, mu_y[2] = {0, 0};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      joint[x][y] = p[x] * q[x][y];
      mu_x[x] += joint[x][y];
      mu_y[y] += joint[x][y];
    }
  double oracle = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (joint[x][y] > 0) oracle += joint[x][y] * std::log(joint[x][y] / (mu_x[x] * mu_y[y]));

  double analytic = std::log(2.0) + 0.1 * std::log(0.1) + 0.9 * std::log(0.9);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "value %.9f, oracle %.9f, analytic %.9f", via_lib, oracle,
                analytic);
  detail = buf;
  return std::abs(via_lib - oracle) <= 1e-9 && std::abs(via_lib - analytic) <= 1e-9 &&
         std::abs(analytic - 0.368064) < 1e-6;
}

// ---- 2: gaussian cut values and schur against sampling --------------------

bool crit_gaussian_cut(std::string& detail) {
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng rng(2, trial);
    double gain = 0.1 + 2.5 * rng.next_unit();
    double power = 0.1 + 4.0 * rng.next_unit();
    double var = 0.1 + 2.0 * rng.next_unit();
    Eigen::MatrixXd g(2, 2), sigma(2, 2);
    g << 0, 0, gain, 0;
    sigma << 1, 0, 0, var;
    Eigen::VectorXd p(2);
    p << power, 1;
    GaussianNetwork net(g, sigma, p);
    double want = 0.5 * std::log1p(gain * gain * power / var);
    double have = gaussian_cut_value(net, p.asDiagonal(), Cut{0b01, 2});
    if (std::abs(want - have) > 1e-9) {
      detail = "log-det mismatch at trial " + std::to_string(trial);
      return false;
    }
  }

  double worst_rel = 0.0;
  for (int dim = 2; dim <= 4; ++dim) {
    CounterRng mk(3, dim);
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = mk.next_gaussian();
    Eigen::MatrixXd k = a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(dim, dim);
    Cut T{0b01, dim};
    Eigen::MatrixXd want = schur_conditional_covariance(k, T);

    Eigen::LLT<Eigen::MatrixXd> llt(k);
    Eigen::MatrixXd chol = llt.matrixL();
    Eigen::MatrixXd sxx = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd gvec(dim);
    const long long draws = 1000000;
    for (long long t = 0; t < draws; ++t) {
      CounterRng rng(40 + dim, t);
      for (int i = 0; i < dim; ++i) gvec(i) = rng.next_gaussian();
      Eigen::VectorXd x = chol * gvec;
      sxx.selfadjointView<Eigen::Lower>().rankUpdate(x);
    }
    sxx = Eigen::MatrixXd(sxx.selfadjointView<Eigen::Lower>()) / static_cast<double>(draws);

    // regression-based sample conditional covariance
    auto t_idx = T.members();
    auto tc_idx = T.complement_members();
    Eigen::MatrixXd s_tt = submatrix(sxx, t_idx, t_idx);
    Eigen::MatrixXd s_ttc = submatrix(sxx, t_idx, tc_idx);
    Eigen::MatrixXd s_tctc = submatrix(sxx, tc_idx, tc_idx);
    Eigen::MatrixXd sampled =
        s_tt - s_ttc * s_tctc.ldlt().solve(s_ttc.transpose());
    worst_rel = std::max(worst_rel, (sampled - want).norm() / want.norm());
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "worst sampled-vs-schur rel. error %.4f", worst_rel);
  detail = buf;
  return worst_rel < 0.02;
}

// ---- 3: region ordering on random networks --------------------------------

bool crit_region_ordering(std::string& detail) {
  OptimizerConfig cfg;
  cfg.restarts = 6;
  cfg.max_iters = 120;
  int violations = 0;
  double worst_gap = 0.0;
  for (int instance = 0; instance < 100; ++instance) {
    int n_nodes = 2 + instance % 2;
    CounterRng rng(700 + instance, 0);
    std::vector<int> in(n_nodes, 2), out(n_nodes, 2);
    long long xs = 1LL << n_nodes, ys = 1LL << n_nodes;
    std::vector<double> channel(xs * ys);
    for (long long x = 0; x < xs; ++x) {
      double sum = 0.0;
      for (long long y = 0; y < ys; ++y) {
        channel[x * ys + y] = 0.05 - std::log(std::max(rng.next_unit(), 1e-300));
        sum += channel[x * ys + y];
      }
      for (long long y = 0; y < ys; ++y) channel[x * ys + y] /= sum;
    }
    DiscreteNetwork net(in, out, channel);
    Eigen::MatrixXd r(n_nodes, n_nodes);
    for (int i = 0; i < n_nodes; ++i)
      for (int j = 0; j < n_nodes; ++j) r(i, j) = i == j ? 0.0 : 0.8 * rng.next_unit();
    RegionAnalysis a = analyze_region(net, RateMatrix(r), cfg);
    double gap = a.outer.margin - a.cutset.margin;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-9) ++violations;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d violations, worst outer-minus-cutset %.2e", violations,
                worst_gap);
  detail = buf;
  return violations == 0;
}

// ---- 4: type machinery -----------------------------------------------------

bool crit_type_machinery(std::string& detail) {
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 10; ++n) {
      std::set<std::vector<long long>> seen;
      std::vector<int> seq(n, 0);
      while (true) {
        seen.insert(type_of(seq, m).counts);
        int i = n - 1;
        while (i >= 0 && seq[i] == m - 1) seq[i--] = 0;
        if (i < 0) break;
        ++seq[i];
      }
      TypeCount tc = count_types(n, m);
      if (tc.exact.to_u64() != seen.size() || !(tc.exact <= tc.upper_bound)) {
        detail = "type count mismatch at n=" + std::to_string(n) + " m=" + std::to_string(m);
        return false;
      }
    }

  double worst_rel = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    CounterRng rng(900, trial);
    int xs = 2 + static_cast<int>(rng.next_below(2));
    int ys = 2 + static_cast<int>(rng.next_below(2));
    int n = 4 + static_cast<int>(rng.next_below(17));
    std::vector<long long> counts(xs * ys, 0);
    for (int k = 0; k < n; ++k) ++counts[rng.next_below(xs * ys)];
    std::vector<double> r(xs, 0.0), s(xs * ys, 0.0), q(xs * ys);
    for (int x = 0; x < xs; ++x) {
      long long row = 0;
      for (int y = 0; y < ys; ++y) row += counts[x * ys + y];
      r[x] = static_cast<double>(row) / n;
      for (int y = 0; y < ys; ++y)
        s[x * ys + y] = row > 0 ? static_cast<double>(counts[x * ys + y]) / row : 1.0 / ys;
    }
    for (int x = 0; x < xs; ++x) {
      double sum = 0.0;
      for (int y = 0; y < ys; ++y) {
        q[x * ys + y] = 0.05 + rng.next_unit();
        sum += q[x * ys + y];
      }
      for (int y = 0; y < ys; ++y) q[x * ys + y] /= sum;
    }
    double a = product_probability_exponent(r, s, q, xs, ys);
    double log_direct = 0.0;
    for (int i = 0; i < xs * ys; ++i)
      if (counts[i] > 0) log_direct += counts[i] * std::log(q[i]);
    double rel = std::abs(-n * a - log_direct) / std::max(1.0, std::abs(log_direct));
    worst_rel = std::max(worst_rel, rel);
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "worst relative exponent error %.2e", worst_rel);
  detail = buf;
  return worst_rel < 1e-10;
}

// ---- 5: discrete certificate soundness ------------------------------------

bool crit_discrete_soundness(std::string& detail) {
  DiscreteNetwork net = bsc_net(0.1);
  OptimizerConfig cfg;
  cfg.restarts = 8;
  DiscreteCertificate cert = discrete_certificate(net, rates2(0.45), cfg);
  if (cert.exponent <= 0.0) {
    detail = "exponent not positive";
    return false;
  }

  std::vector<int> lens{4, 8, 12, 14};
  std::vector<double> correct, se;
  for (int n : lens) {
    SimRow row = run_random_ensemble(net, 0.45, n, 100000, 777 + n);
    correct.push_back(1.0 - row.eps_hat);
    se.push_back(row.std_error());
    if (1.0 - row.eps_hat > cert.bound(n) + 3.0 * row.std_error()) {
      detail = "bound violated at n=" + std::to_string(n);
      return false;
    }
  }
  for (std::size_t i = 1; i < correct.size(); ++i) {
    double sep = 3.0 * (se[i - 1] + se[i]);
    if (!(correct[i] < correct[i - 1] - sep)) {
      char buf[120];
      std::snprintf(buf, sizeof(buf), "no 3-SE decrease between n=%d and n=%d", lens[i - 1],
                    lens[i]);
      detail = buf;
      return false;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "E=%.3e, correct: %.4f %.4f %.4f %.4f", cert.exponent,
                correct[0], correct[1], correct[2], correct[3]);
  detail = buf;
  return true;
}

// ---- 6: gaussian certificate soundness -------------------------------------

bool crit_gaussian_soundness(std::string& detail) {
  GaussianNetwork net = scalar_link();
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.max_iters = 80;
  GaussianCertificate cert = gaussian_certificate(net, rates2(0.5), cfg);
  if (cert.eta <= 0.0 || cert.tau <= 0.0) {
    detail = "certificate constants not positive";
    return false;
  }

  std::vector<int> lens{2, 4, 8};
  std::vector<double> correct;
  for (int n : lens) {
    SimRow row = run_gaussian_random_ensemble(net, 0.5, n, 100000, 888 + n);
    correct.push_back(1.0 - row.eps_hat);
    double bound = cert.bound(n);  // vacuous (> 1) at these n; check must still pass
    if (1.0 - row.eps_hat > bound + 3.0 * row.std_error()) {
      detail = "bound violated at n=" + std::to_string(n);
      return false;
    }
  }
  bool decreasing = correct[1] < correct[0] && correct[2] < correct[1];
  char buf[160];
  std::snprintf(buf, sizeof(buf), "eta=%.4f tau=%.2e, correct: %.4f %.4f %.4f", cert.eta,
                cert.tau, correct[0], correct[1], correct[2]);
  detail = buf;
  return decreasing;
}

// ---- 7: typical-set concentration ------------------------------------------

bool crit_concentration(std::string& detail) {
  GaussianNetwork net = scalar_link();
  Eigen::LLT<Eigen::MatrixXd> llt(net.noise_cov());
  Eigen::MatrixXd chol = llt.matrixL();
  const double delta = 0.1;
  const int trials = 10000;
  std::vector<int> lens{250, 500, 1000, 2000};
  std::vector<double> reject, ses;
  for (int len : lens) {
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      CounterRng rng(1100 + len, t);
      Eigen::MatrixXd x(2, len), z(2, len);
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < len; ++k) x(i, k) = std::sqrt(0.5) * rng.next_gaussian();
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < len; ++k) z(i, k) = rng.next_gaussian();
      Eigen::MatrixXd y = net.gain() * x + chol * z;
      if (!typical_set_check(gaussian_type(x, y), delta, net)) ++bad;
    }
    double rate = static_cast<double>(bad) / trials;
    reject.push_back(rate);
    ses.push_back(std::sqrt(rate * (1 - rate) / trials));
  }
  for (std::size_t i = 1; i < reject.size(); ++i) {
    double combined = 3.0 * (ses[i - 1] + ses[i]);
    if (reject[i] > reject[i - 1] + combined) {
      detail = "rejection rate increased between blocklengths";
      return false;
    }
  }
  // least-squares slope of log rejection rate on n
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lens.size(); ++i) {
    double x = lens[i];
    double y = std::log(std::max(reject[i], 0.5 / trials));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (lens.size() * sxy - sx * sy) / (lens.size() * sxx - sx * sx);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "reject: %.3f %.3f %.3f %.4f, slope %.2e", reject[0],
                reject[1], reject[2], reject[3], slope);
  detail = buf;
  return slope < 0.0;
}

// ---- 8: exponential martingale ---------------------------------------------

bool crit_martingale(std::string& detail) {
  const long long trials = 1000000;
  auto zero = [](std::span<const double>) { return 0.0; };
  auto constant = [](std::span<const double>) { return 0.8; };
  auto sign = [](std::span<const double> past) {
    return past.empty() ? 1.0 : (past.back() >= 0.0 ? 1.0 : -1.0);
  };
  struct Policy {
    const char* name;
    CausalPolicy fn;
  };
  std::vector<Policy> policies{{"zero", zero}, {"constant", constant}, {"sign", sign}};
  std::string parts;
  for (auto& policy : policies) {
    auto est = mgf_martingale_check(policy.fn, 1.0, 0.25, 16, trials, 4242);
    double dev = std::abs(est.mean - 1.0);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s: %.5f+-%.5f ", policy.name, est.mean, est.std_error);
    parts += buf;
    if (dev > 4.0 * est.std_error) {
      detail = parts + "(outside 4 SE)";
      return false;
    }
  }
  detail = parts;
  return true;
}

// ---- 9: quantizer bounds -----------------------------------------------------

bool crit_quantizer(std::string& detail) {
  for (int trial = 0; trial < 50; ++trial) {
    CounterRng rng(1300, trial);
    double power = 0.3 + 4.0 * rng.next_unit();
    double spacing = 0.02 + 0.6 * rng.next_unit();
    double gamma = 0.005 + 0.05 * rng.next_unit();
    long long cells = 0;
    for (long long m = -8; m * spacing <= power + spacing; ++m) {
      double lo = m * spacing, hi = lo + spacing;
      if (hi > gamma && lo <= power) ++cells;
    }
    Eigen::VectorXd p(1);
    p << power;
    if (!(BigUint(static_cast<std::uint64_t>(cells)) <= quantizer_count_bound(spacing, p))) {
      detail = "enumeration exceeded the cardinality bound";
      return false;
    }
  }
  for (int trial = 0; trial < 10000; ++trial) {
    CounterRng rng(1400, trial);
    double spacing = 0.05 + rng.next_unit();
    Eigen::MatrixXd b(2, 2);
    for (int i = 0; i < 4; ++i) b(i / 2, i % 2) = 10.0 * rng.next_unit() - 5.0;
    Eigen::MatrixXd lam = quantize(b, spacing);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (!(lam(i, j) <= b(i, j) && b(i, j) < lam(i, j) + spacing)) {
          detail = "voronoi containment violated";
          return false;
        }
  }
  detail = "50 enumerations within bound; 10000 voronoi containments";
  return true;
}

// ---- 10: redundant-slot transform -------------------------------------------

bool crit_redundant(std::string& detail) {
  GaussianNetwork net = scalar_link();
  const double delta = 0.05;
  const int n_bar = 60;
  double worst_eig = 1e300, worst_power = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    CounterRng rng(1500, trial);
    auto stream = std::make_shared<std::vector<double>>(2 * n_bar);
    for (auto& v : *stream) v = 0.7 * rng.next_gaussian();
    for (int i = 0; i < 2; ++i) {
      double e = 0.0;
      for (int k = 0; k < n_bar; ++k) e += (*stream)[i * n_bar + k] * (*stream)[i * n_bar + k];
      if (e / n_bar > 1.0)
        for (int k = 0; k < n_bar; ++k) (*stream)[i * n_bar + k] /= std::sqrt(e / n_bar);
    }
    GaussianCode base;
    base.n_nodes = 2;
    base.block_len = n_bar;
    base.power = net.power();
    base.msg_sizes.setOnes(2, 2);
    base.encode = [stream, n_bar](int node, int k, const MessageRow&, std::span<const double>) {
      return k <= n_bar ? (*stream)[node * n_bar + (k - 1)] : 0.0;
    };
    base.decode = [](int, const MessageRow&, std::span<const double>) {
      return std::vector<long long>(2, 0);
    };
    GaussianCode aug = append_redundant_slots(base, delta, net.power());
    Eigen::MatrixXd x(2, aug.block_len);
    std::vector<double> none;
    for (int k = 1; k <= aug.block_len; ++k)
      for (int i = 0; i < 2; ++i)
        x(i, k - 1) = aug.encode(i, k, MessageRow(2, 0), std::span<const double>(none.data(), 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(empirical_correlation(x, x));
    worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
    for (int i = 0; i < 2; ++i)
      worst_power =
          std::max(worst_power, x.row(i).squaredNorm() / aug.block_len / net.power()(i));
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "min eigenvalue %.6f (floor %.6f), worst power ratio %.4f",
                worst_eig, delta * net.p_min(), worst_power);
  detail = buf;
  return worst_eig >= delta * net.p_min() - 1e-10 && worst_power <= 1.0 + delta + 1e-12;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "discrete-cut-values", 1.0, crit_discrete_cut},
      {2, "gaussian-cut-values", 30.0, crit_gaussian_cut},
      {3, "region-ordering", 300.0, crit_region_ordering},
      {4, "type-machinery", 60.0, crit_type_machinery},
      {5, "discrete-certificate-soundness", 600.0, crit_discrete_soundness},
      {6, "gaussian-certificate-soundness", 600.0, crit_gaussian_soundness},
      {7, "typical-set-concentration", 600.0, crit_concentration},
      {8, "martingale-identity", 600.0, crit_martingale},
      {9, "quantizer-bounds", 60.0, crit_quantizer},
      {10, "redundant-slot-transform", 60.0, crit_redundant},
  };

  int failures = 0;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = elapsed < c.budget_s;
    bool pass = ok && in_budget;
    std::printf("[%s] %2d. %-33s %6.1fs/%-5.0fs  %s\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), elapsed, c.budget_s, detail.c_str());
    if (!pass) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
