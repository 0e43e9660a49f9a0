// Regenerates the canonical JSON fixtures under tests/data.

#include <fstream>
#include <iostream>

#include "cutset/net_model.hpp"
#include "cutset/report.hpp"

using namespace cutset;

namespace {

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  std::cout << path << "\n";
}

std::string discrete_spec(const std::vector<int>& in_sizes, const std::vector<int>& out_sizes,
                          const std::vector<double>& channel) {
  LoadedNetwork net;
  net.kind = NetworkKind::Discrete;
  net.discrete = std::make_shared<DiscreteNetwork>(in_sizes, out_sizes, channel);
  return serialize_network(net);
}

std::string gaussian_spec(const Eigen::MatrixXd& g, const Eigen::MatrixXd& sigma,
                          const Eigen::VectorXd& p) {
  LoadedNetwork net;
  net.kind = NetworkKind::Gaussian;
  net.gaussian = std::make_shared<GaussianNetwork>(g, sigma, p);
  return serialize_network(net);
}

std::string rates_json(const std::vector<double>& flat) {
  Json j;
  j["rates"] = flat;
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "tests/data";

  // two-node one-way BSC(0.1): sender node 1, receiver node 2
  write(dir + "/bsc01.json",
        discrete_spec({2, 1}, {1, 2}, {0.9, 0.1, 0.1, 0.9}));

  // physically ordered three-node relay line: BSC(0.05) then BSC(0.1)
  {
    auto bsc = [](double p, int y, int x) { return y == x ? 1.0 - p : p; };
    std::vector<double> channel;
    for (int x0 = 0; x0 < 2; ++x0)
      for (int x1 = 0; x1 < 2; ++x1)
        for (int y1 = 0; y1 < 2; ++y1)
          for (int y2 = 0; y2 < 2; ++y2)
            channel.push_back(bsc(0.05, y1, x0) * bsc(0.10, y2, x1));
    write(dir + "/relay3.json", discrete_spec({2, 2, 1}, {1, 2, 2}, channel));
  }

  // three-node instance whose cut optima need incompatible input laws:
  // the sink observes (X2 == 0) ? 0 : (1 + X1)
  {
    std::vector<double> channel;
    for (int x0 = 0; x0 < 2; ++x0)
      for (int x1 = 0; x1 < 2; ++x1)
        for (int y2 = 0; y2 < 3; ++y2) {
          int out = x1 == 0 ? 0 : 1 + x0;
          channel.push_back(y2 == out ? 1.0 : 0.0);
        }
    write(dir + "/gap3.json", discrete_spec({2, 2, 1}, {1, 1, 3}, channel));
  }

  // relay line with an output-feedback channel: node 2 receives the pair
  // (BSC(0.05) copy of X1, X3 verbatim), so node 3 can replay its own
  // outputs back to the relay; node 3 receives BSC(0.1) of X2
  {
    auto bsc = [](double p, int y, int x) { return y == x ? 1.0 - p : p; };
    std::vector<double> channel;
    for (int x0 = 0; x0 < 2; ++x0)
      for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
          for (int y1a = 0; y1a < 2; ++y1a)
            for (int y1b = 0; y1b < 2; ++y1b)
              for (int y2 = 0; y2 < 2; ++y2)
                channel.push_back(bsc(0.05, y1a, x0) * (y1b == x2 ? 1.0 : 0.0) *
                                  bsc(0.10, y2, x1));
    write(dir + "/relay_feedback.json", discrete_spec({2, 2, 2}, {1, 4, 2}, channel));
  }

  // scalar Gaussian link: node 2 receives X1 + Z2
  {
    Eigen::MatrixXd g(2, 2), sigma(2, 2);
    g << 0, 0, 1, 0;
    sigma << 1, 0, 0, 1;
    Eigen::VectorXd p(2);
    p << 1, 1;
    write(dir + "/gauss_scalar.json", gaussian_spec(g, sigma, p));
  }

  write(dir + "/rates2_zero.json", rates_json({0, 0, 0, 0}));
  write(dir + "/rates2_040.json", rates_json({0, 0.40, 0, 0}));
  write(dir + "/rates2_045.json", rates_json({0, 0.45, 0, 0}));
  write(dir + "/rates2_050.json", rates_json({0, 0.5, 0, 0}));
  write(dir + "/rates3_zero.json", rates_json({0, 0, 0, 0, 0, 0, 0, 0, 0}));
  write(dir + "/rates3_gap.json", rates_json({0, 0, 0.65, 0, 0, 0.33, 0, 0, 0}));

  {
    Json dist;
    dist["probs"] = std::vector<double>{0.5, 0.5};
    write(dir + "/dist_bsc_uniform.json", dist.dump(2) + "\n");
    Json cov;
    cov["cov"] = std::vector<double>{1, 0, 0, 1};
    write(dir + "/cov_diag.json", cov.dump(2) + "\n");
  }
  return 0;
}
