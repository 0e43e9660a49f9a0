#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "cutset/region.hpp"
#include "cutset/rng.hpp"

using namespace cutset;

namespace {

const std::string kData = CUTSET_TEST_DATA;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DiscreteNetwork bsc_net(double flip) {
  return DiscreteNetwork({2, 1}, {1, 2}, {1.0 - flip, flip, flip, 1.0 - flip});
}

RateMatrix rates2(double r01) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2, 2);
  r(0, 1) = r01;
  return RateMatrix(r);
}

DiscreteNetwork random_binary_net(std::uint64_t seed, int n_nodes) {
  CounterRng rng(seed, 0);
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
  return DiscreteNetwork(in, out, channel);
}

RateMatrix random_rates(std::uint64_t seed, int n_nodes, double scale) {
  CounterRng rng(seed, 1);
  Eigen::MatrixXd r(n_nodes, n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    for (int j = 0; j < n_nodes; ++j) r(i, j) = i == j ? 0.0 : scale * rng.next_unit();
  return RateMatrix(r);
}

OptimizerConfig fast_cfg(int restarts = 8) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iters = 150;
  return cfg;
}

}  // namespace

TEST_CASE("cut_value_discrete composes against the summation oracle") {
  DiscreteNetwork net = bsc_net(0.1);
  std::vector<double> uniform{0.5, 0.5};
  double want = std::log(2.0) + 0.1 * std::log(0.1) + 0.9 * std::log(0.9);
  CHECK(cut_value_discrete(net, uniform, Cut{0b01, 2}) == doctest::Approx(want).epsilon(1e-12));
  CHECK(cut_value_discrete(net, uniform, Cut{0b11, 2}) == 0.0);

  // relay line, uniform independent inputs, cut T = {1,2}
  LoadedNetwork relay = load_network(read_file(kData + "/relay3.json"));
  std::vector<double> p(relay.discrete->input_support(),
                        1.0 / relay.discrete->input_support());
  double via_op = cut_value_discrete(*relay.discrete, p, Cut{0b011, 3});
  // oracle: I(X1 X2; Y3) with Y3 ~ BSC(0.1) from X2 alone
  double oracle = std::log(2.0) + 0.1 * std::log(0.1) + 0.9 * std::log(0.9);
  CHECK(via_op == doctest::Approx(oracle).epsilon(1e-10));
  // and the fast path agrees with the composed path on every cut
  auto fast = all_cut_values(*relay.discrete, p);
  for (std::uint32_t mask = 0; mask < fast.size(); ++mask)
    CHECK(fast[mask] ==
          doctest::Approx(cut_value_discrete(*relay.discrete, p, Cut{mask, 3})).epsilon(1e-10));
}

TEST_CASE("zero rates are inside") {
  auto verdict = region_margin(bsc_net(0.1), rates2(0.0), fast_cfg());
  CHECK(verdict.inside);
  CHECK(verdict.margin <= 1e-9);
  CHECK(verdict.certified);
}

TEST_CASE("witnesses are feasible") {
  auto d = region_margin(bsc_net(0.1), rates2(0.40), fast_cfg());
  double sum = 0.0;
  for (double p : d.witness_pmf) {
    CHECK(p >= 0.0);
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  LoadedNetwork gauss = load_network(read_file(kData + "/gauss_scalar.json"));
  auto g = region_margin(*gauss.gaussian, rates2(0.5), fast_cfg());
  REQUIRE(g.witness_cov.rows() == 2);
  for (int i = 0; i < 2; ++i) CHECK(g.witness_cov(i, i) <= gauss.gaussian->power()(i) + 1e-9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.witness_cov);
  CHECK(es.eigenvalues().minCoeff() >= -1e-9);
}

TEST_CASE("BSC at 0.40 nats is outside with the known margin") {
  auto verdict = region_margin(bsc_net(0.1), rates2(0.40), fast_cfg());
  double capacity = std::log(2.0) + 0.1 * std::log(0.1) + 0.9 * std::log(0.9);
  CHECK_FALSE(verdict.inside);
  CHECK(verdict.certified);
  CHECK(verdict.worst_cut == 1);
  CHECK(verdict.margin == doctest::Approx(0.40 - capacity).epsilon(1e-6));

  // grid oracle over p(x) in steps of 1e-4
  double best = 1e300;
  for (int i = 0; i <= 10000; ++i) {
    double p = i * 1e-4;
    std::vector<double> pm{p, 1.0 - p};
    double worst = std::max(0.0, 0.40 - cut_value_discrete(bsc_net(0.1), pm, Cut{1, 2}));
    best = std::min(best, worst);
  }
  CHECK(verdict.margin == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("scalar gaussian link at 0.5 nats is outside") {
  LoadedNetwork net = load_network(read_file(kData + "/gauss_scalar.json"));
  auto verdict = region_margin(*net.gaussian, rates2(0.5), fast_cfg());
  CHECK_FALSE(verdict.inside);
  CHECK(verdict.margin == doctest::Approx(0.5 - 0.5 * std::log(2.0)).epsilon(1e-6));

  // exhaustive over K = diag(k11 <= 1, k22)
  double best = 1e300;
  for (int i = 0; i <= 1000; ++i) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2, 2);
    k(0, 0) = i * 1e-3;
    k(1, 1) = 1.0;
    double worst = std::max(0.0, 0.5 - gaussian_cut_value(*net.gaussian, k, Cut{1, 2}));
    best = std::min(best, worst);
  }
  CHECK(verdict.margin == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("outer margin never exceeds the cut-set margin") {
  for (int instance = 0; instance < 20; ++instance) {
    int n_nodes = 2 + instance % 2;
    DiscreteNetwork net = random_binary_net(100 + instance, n_nodes);
    RateMatrix rates = random_rates(200 + instance, n_nodes, 0.8);
    RegionAnalysis a = analyze_region(net, rates, fast_cfg(6));
    CHECK(a.outer.margin <= a.cutset.margin + 1e-9);
  }
}

TEST_CASE("single nontrivial cut makes both margins equal") {
  RegionAnalysis a = analyze_region(bsc_net(0.1), rates2(0.40), fast_cfg());
  CHECK(a.outer.margin == doctest::Approx(a.cutset.margin).epsilon(1e-9));
}

TEST_CASE("split-optima instance separates the two regions") {
  LoadedNetwork net = load_network(read_file(kData + "/gap3.json"));
  RateMatrix rates = load_rates(read_file(kData + "/rates3_gap.json"), 3);
  RegionAnalysis a = analyze_region(*net.discrete, rates, fast_cfg(16));
  CHECK(a.outer.margin <= 1e-6);       // inside the swapped region
  CHECK(a.cutset.margin > 0.02);       // strictly outside the cut-set region
  CHECK(a.outer.margin < a.cutset.margin - 0.02);
  // N = 3 has no certification grid: outside verdicts stay uncertified
  CHECK_FALSE(a.cutset.certified);
  CHECK(a.outer.certified);  // inside verdicts carry their witnesses
}

TEST_CASE("entrywise smaller rates stay inside") {
  DiscreteNetwork net = random_binary_net(300, 2);
  for (int k = 0; k < 6; ++k) {
    RateMatrix rates = random_rates(400 + k, 2, 0.5);
    auto verdict = region_margin(net, rates, fast_cfg());
    if (!verdict.inside) continue;
    RateMatrix smaller(rates.rates() * 0.6);
    CHECK(region_margin(net, smaller, fast_cfg()).inside);
  }
}

TEST_CASE("trivial cuts contribute zero") {
  DiscreteNetwork net = random_binary_net(500, 3);
  std::vector<double> p(net.input_support(), 1.0 / net.input_support());
  auto values = all_cut_values(net, p);
  CHECK(values.size() == 8);
  CHECK(values[0] == 0.0);
  CHECK(values[7] == 0.0);
  LoadedNetwork gauss = load_network(read_file(kData + "/gauss_scalar.json"));
  auto gvalues = all_cut_values(*gauss.gaussian, Eigen::MatrixXd::Identity(2, 2));
  CHECK(gvalues[0] == 0.0);
  CHECK(gvalues[3] == 0.0);
}

TEST_CASE("enlarging the power budget grows the gaussian region") {
  for (int k = 0; k < 4; ++k) {
    CounterRng rng(600 + k, 0);
    Eigen::MatrixXd g(2, 2);
    g << 0, 0, 0.5 + rng.next_unit(), 0;
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd p(2);
    p << 0.5 + rng.next_unit(), 1.0;
    GaussianNetwork net(g, sigma, p);
    GaussianNetwork bigger(g, sigma, 1.5 * p);
    RateMatrix rates = rates2(0.3);
    double m_small = region_margin(net, rates, fast_cfg()).margin;
    double m_big = region_margin(bigger, rates, fast_cfg()).margin;
    CHECK(m_big <= m_small + 1e-6);
  }
}

TEST_CASE("optimizer margin matches the 1e-3 grid on one-way binary networks") {
  for (double flip : {0.05, 0.1, 0.2}) {
    DiscreteNetwork net = bsc_net(flip);
    RateMatrix rates = rates2(0.42);
    auto verdict = region_margin(net, rates, fast_cfg());
    double grid_best = 1e300;
    for (int i = 0; i <= 1000; ++i) {
      std::vector<double> pm{i * 1e-3, 1.0 - i * 1e-3};
      double worst = std::max(0.0, 0.42 - cut_value_discrete(net, pm, Cut{1, 2}));
      grid_best = std::min(grid_best, worst);
    }
    CHECK(std::abs(verdict.margin - grid_best) < 2e-3);
  }
}

TEST_CASE("symmetric binary-input network margin matches its coarser grid") {
  // both inputs binary: the certification grid runs at an adapted step
  DiscreteNetwork net = random_binary_net(900, 2);
  RateMatrix rates = random_rates(901, 2, 0.9);
  OptimizerConfig cfg = fast_cfg();
  cfg.grid_step = 4e-3;
  auto a = analyze_region(net, rates, cfg);
  CHECK(a.cutset.grid_ran);
  CHECK(a.cutset.certified);
}
