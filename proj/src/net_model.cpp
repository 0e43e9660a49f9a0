#include "cutset/net_model.hpp"

#include <json.hpp>

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace cutset {

using json = nlohmann::ordered_json;

std::vector<int> Cut::members() const {
  std::vector<int> out;
  for (int i = 0; i < n_nodes; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::vector<int> Cut::complement_members() const {
  std::vector<int> out;
  for (int i = 0; i < n_nodes; ++i)
    if (!contains(i)) out.push_back(i);
  return out;
}

long long MixedRadix::index(const std::vector<int>& digits) const {
  long long idx = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) idx = idx * sizes[i] + digits[i];
  return idx;
}

void MixedRadix::decode(long long index, std::vector<int>& digits) const {
  digits.resize(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    digits[i] = static_cast<int>(index % sizes[i]);
    index /= sizes[i];
  }
}

bool MixedRadix::next(std::vector<int>& digits) const {
  for (std::size_t i = sizes.size(); i-- > 0;) {
    if (++digits[i] < sizes[i]) return true;
    digits[i] = 0;
  }
  return false;
}

DiscreteNetwork::DiscreteNetwork(std::vector<int> input_sizes, std::vector<int> output_sizes,
                                 std::vector<double> channel)
    : input_sizes_(std::move(input_sizes)),
      output_sizes_(std::move(output_sizes)),
      channel_(std::move(channel)) {
  const int n = node_count();
  if (n < 1) throw std::invalid_argument("network needs at least one node");
  if (static_cast<int>(output_sizes_.size()) != n)
    throw std::invalid_argument("input/output alphabet lists disagree on node count");
  for (int s : input_sizes_)
    if (s < 1) throw std::invalid_argument("alphabet sizes must be >= 1");
  for (int s : output_sizes_)
    if (s < 1) throw std::invalid_argument("alphabet sizes must be >= 1");

  long long xs = input_support(), ys = output_support();
  if (xs * ys > kMaxEntries)
    throw std::invalid_argument("channel tensor exceeds the dense-storage cap");
  if (static_cast<long long>(channel_.size()) != xs * ys)
    throw std::invalid_argument("channel tensor has wrong length");

  for (long long x = 0; x < xs; ++x) {
    double sum = 0.0;
    for (long long y = 0; y < ys; ++y) {
      double p = channel_[x * ys + y];
      if (p < 0.0) throw std::invalid_argument("negative channel probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSliceTol)
      throw std::invalid_argument("channel slice does not sum to 1 (x index " +
                                  std::to_string(x) + ")");
  }
}

long long DiscreteNetwork::input_support() const {
  long long t = 1;
  for (int s : input_sizes_) t *= s;
  return t;
}

long long DiscreteNetwork::output_support() const {
  long long t = 1;
  for (int s : output_sizes_) t *= s;
  return t;
}

double DiscreteNetwork::prob(long long x_index, long long y_index) const {
  return channel_[x_index * output_support() + y_index];
}

long long MarginalChannel::input_support() const {
  long long t = 1;
  for (int s : input_sizes) t *= s;
  return t;
}

long long MarginalChannel::output_support() const {
  long long t = 1;
  for (int s : output_sizes) t *= s;
  return t;
}

MarginalChannel marginalize_channel(const DiscreteNetwork& net, const Cut& T) {
  const int n = net.node_count();
  if (T.n_nodes != n) throw std::invalid_argument("cut node count mismatch");

  MarginalChannel out;
  out.input_sizes = net.input_sizes();
  out.output_nodes = T.complement_members();
  for (int node : out.output_nodes) out.output_sizes.push_back(net.output_sizes()[node]);

  const long long xs = net.input_support();
  const long long ys_full = net.output_support();
  const long long ys_kept = out.output_support();
  out.probs.assign(xs * ys_kept, 0.0);

  // map a full y index to the kept sub-index once per y
  std::vector<long long> kept_index(ys_full);
  MixedRadix full{net.output_sizes()};
  std::vector<int> digits(n, 0);
  long long y = 0;
  do {
    long long idx = 0;
    for (std::size_t j = 0; j < out.output_nodes.size(); ++j)
      idx = idx * out.output_sizes[j] + digits[out.output_nodes[j]];
    kept_index[y] = idx;
    ++y;
  } while (full.next(digits));

  for (long long x = 0; x < xs; ++x)
    for (long long yf = 0; yf < ys_full; ++yf)
      out.probs[x * ys_kept + kept_index[yf]] += net.prob(x, yf);

  return out;
}

GaussianNetwork::GaussianNetwork(Eigen::MatrixXd gain, Eigen::MatrixXd noise_cov,
                                 Eigen::VectorXd power)
    : gain_(std::move(gain)), noise_cov_(std::move(noise_cov)), power_(std::move(power)) {
  const int n = node_count();
  if (n < 1) throw std::invalid_argument("network needs at least one node");
  if (gain_.rows() != n || gain_.cols() != n)
    throw std::invalid_argument("gain matrix must be N x N");
  if (noise_cov_.rows() != n || noise_cov_.cols() != n)
    throw std::invalid_argument("noise covariance must be N x N");
  if ((noise_cov_ - noise_cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("noise covariance must be symmetric");
  for (int i = 0; i < n; ++i)
    if (power_(i) <= 0.0) throw std::invalid_argument("power must be positive");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(noise_cov_);
  sigma_min_ = es.eigenvalues().minCoeff();
  if (sigma_min_ <= 0.0)
    throw std::invalid_argument("noise covariance not positive definite");
  g_max_ = gain_.cwiseAbs().maxCoeff();
  p_min_ = power_.minCoeff();
  p_max_ = power_.maxCoeff();
}

double GaussianNetwork::log_marginal_density(const Cut& T, const Eigen::VectorXd& y,
                                             const Eigen::VectorXd& x) const {
  std::vector<int> tc = T.complement_members();
  const int d = static_cast<int>(tc.size());
  if (y.size() != d || x.size() != node_count())
    throw std::invalid_argument("dimension mismatch in marginal density");
  if (d == 0) return 0.0;  // degenerate density over the empty tuple

  Eigen::MatrixXd g_rows(d, node_count());
  for (int r = 0; r < d; ++r) g_rows.row(r) = gain_.row(tc[r]);
  Eigen::MatrixXd sigma = submatrix(noise_cov_, tc, tc);

  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  Eigen::VectorXd resid = y - g_rows * x;
  Eigen::VectorXd w = llt.matrixL().solve(resid);
  double logdet = 0.0;
  for (int i = 0; i < d; ++i) logdet += std::log(llt.matrixL()(i, i));
  return -0.5 * d * std::log(2.0 * M_PI) - logdet - 0.5 * w.squaredNorm();
}

RateMatrix::RateMatrix(Eigen::MatrixXd rates) : rates_(std::move(rates)) {
  if (rates_.rows() != rates_.cols()) throw std::invalid_argument("rate matrix must be square");
  for (int i = 0; i < rates_.rows(); ++i) {
    if (rates_(i, i) != 0.0)
      throw std::invalid_argument("rate matrix diagonal must be exactly zero");
    for (int j = 0; j < rates_.cols(); ++j)
      if (rates_(i, j) < 0.0) throw std::invalid_argument("rates must be nonnegative");
  }
}

double RateMatrix::cut_rate_sum(const Cut& T) const {
  double s = 0.0;
  for (int i = 0; i < node_count(); ++i)
    for (int j = 0; j < node_count(); ++j)
      if (T.contains(i) && !T.contains(j)) s += rates_(i, j);
  return s;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  return out;
}

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("spec parse error: ") + e.what());
  }
}

std::vector<double> as_doubles(const json& arr, const char* what) {
  if (!arr.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.push_back(v.get<double>());
  return out;
}

std::vector<int> as_ints(const json& arr, const char* what) {
  if (!arr.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<int> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.push_back(v.get<int>());
  return out;
}

Eigen::MatrixXd as_square(const std::vector<double>& flat, int n, const char* what) {
  if (static_cast<int>(flat.size()) != n * n)
    throw std::invalid_argument(std::string(what) + " must have N*N entries");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = flat[i * n + j];
  return m;
}

LoadedNetwork load_network_checked(const json& doc) {
  std::string kind = doc.at("kind").get<std::string>();
  int n = doc.at("n_nodes").get<int>();
  if (n < 1) throw std::invalid_argument("n_nodes must be >= 1");

  LoadedNetwork out;
  if (kind == "discrete") {
    const auto& d = doc.at("discrete");
    auto in_sizes = as_ints(d.at("input_sizes"), "input_sizes");
    auto out_sizes = as_ints(d.at("output_sizes"), "output_sizes");
    if (static_cast<int>(in_sizes.size()) != n)
      throw std::invalid_argument("input_sizes length must equal n_nodes");
    auto channel = as_doubles(d.at("channel"), "channel");
    out.kind = NetworkKind::Discrete;
    out.discrete = std::make_shared<DiscreteNetwork>(in_sizes, out_sizes, channel);
  } else if (kind == "gaussian") {
    const auto& g = doc.at("gaussian");
    Eigen::MatrixXd gain = as_square(as_doubles(g.at("gain"), "gain"), n, "gain");
    Eigen::MatrixXd cov = as_square(as_doubles(g.at("noise_cov"), "noise_cov"), n, "noise_cov");
    auto pw = as_doubles(g.at("power"), "power");
    if (static_cast<int>(pw.size()) != n)
      throw std::invalid_argument("power length must equal n_nodes");
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p(i) = pw[i];
    out.kind = NetworkKind::Gaussian;
    out.gaussian = std::make_shared<GaussianNetwork>(gain, cov, p);
  } else {
    throw std::invalid_argument("kind must be 'discrete' or 'gaussian'");
  }
  return out;
}

}  // namespace

LoadedNetwork load_network(const std::string& spec_text) {
  json doc = parse(spec_text);
  try {
    return load_network_checked(doc);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("spec schema error: ") + e.what());
  }
}

std::string serialize_network(const LoadedNetwork& net) {
  json doc;
  if (net.kind == NetworkKind::Discrete) {
    const auto& d = *net.discrete;
    doc["kind"] = "discrete";
    doc["n_nodes"] = d.node_count();
    doc["discrete"] = json{{"input_sizes", d.input_sizes()},
                           {"output_sizes", d.output_sizes()},
                           {"channel", d.channel()}};
  } else {
    const auto& g = *net.gaussian;
    int n = g.node_count();
    std::vector<double> gain(n * n), cov(n * n), power(n);
    for (int i = 0; i < n; ++i) {
      power[i] = g.power()(i);
      for (int j = 0; j < n; ++j) {
        gain[i * n + j] = g.gain()(i, j);
        cov[i * n + j] = g.noise_cov()(i, j);
      }
    }
    doc["kind"] = "gaussian";
    doc["n_nodes"] = n;
    doc["gaussian"] = json{{"gain", gain}, {"noise_cov", cov}, {"power", power}};
  }
  return doc.dump(2) + "\n";
}

RateMatrix load_rates(const std::string& text, int n_nodes) {
  json doc = parse(text);
  try {
    auto flat = as_doubles(doc.at("rates"), "rates");
    return RateMatrix(as_square(flat, n_nodes, "rates"));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("rates schema error: ") + e.what());
  }
}

std::vector<double> load_dist(const std::string& text, long long support) {
  json doc = parse(text);
  try {
    auto probs = as_doubles(doc.at("probs"), "probs");
    if (static_cast<long long>(probs.size()) != support)
      throw std::invalid_argument("dist support does not match the network input alphabets");
    return probs;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("dist schema error: ") + e.what());
  }
}

Eigen::MatrixXd load_cov(const std::string& text, int n_nodes) {
  json doc = parse(text);
  try {
    return as_square(as_doubles(doc.at("cov"), "cov"), n_nodes, "cov");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("cov schema error: ") + e.what());
  }
}

}  // namespace cutset
