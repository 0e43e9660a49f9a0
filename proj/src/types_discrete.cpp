#include "cutset/types_discrete.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cutset {

std::vector<double> TypeHistogram::pmf() const {
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  return p;
}

TypeHistogram type_of(std::span<const int> sequence, int alphabet_size) {
  if (sequence.empty()) throw std::invalid_argument("type of an empty sequence");
  TypeHistogram t;
  t.alphabet_size = alphabet_size;
  t.n = static_cast<int>(sequence.size());
  t.counts.assign(alphabet_size, 0);
  for (int s : sequence) {
    if (s < 0 || s >= alphabet_size) throw std::out_of_range("symbol outside the alphabet");
    ++t.counts[s];
  }
  return t;
}

TypeCount count_types(long long n, int alphabet_size) {
  if (n < 1 || alphabet_size < 1) throw std::invalid_argument("count_types needs n, m >= 1");
  TypeCount out;
  out.exact = BigUint::binomial(static_cast<std::uint64_t>(n + alphabet_size - 1),
                                static_cast<std::uint64_t>(alphabet_size - 1));
  out.upper_bound =
      BigUint::pow(static_cast<std::uint64_t>(n + 1), static_cast<unsigned>(alphabet_size));
  return out;
}

double product_probability_exponent(const std::vector<double>& r, const std::vector<double>& s,
                                    const std::vector<double>& q, int x_size, int y_size) {
  if (static_cast<int>(r.size()) != x_size || static_cast<int>(s.size()) != x_size * y_size ||
      static_cast<int>(q.size()) != x_size * y_size)
    throw std::invalid_argument("product_probability_exponent: shape mismatch");
  // H_{rs}(Y|X) + D(s||q|r) collapses to the cross entropy -sum r s log q
  double a = 0.0;
  for (int x = 0; x < x_size; ++x) {
    if (r[x] <= 0.0) continue;
    for (int y = 0; y < y_size; ++y) {
      double sv = s[x * y_size + y];
      if (sv <= 0.0) continue;
      double qv = q[x * y_size + y];
      if (qv <= 0.0) return std::numeric_limits<double>::infinity();
      a -= r[x] * sv * std::log(qv);
    }
  }
  return a;
}

namespace {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

}  // namespace

double cmi_continuity_modulus(double d, long long joint_support) {
  if (d < 0.0) throw std::invalid_argument("distance must be nonnegative");
  double m = static_cast<double>(joint_support);
  return 3.0 * (d * std::log(m) + binary_entropy(std::min(d, 0.5)));
}

double continuity_xi(const DiscreteNetwork& net, double delta_star) {
  if (delta_star <= 0.0) throw std::invalid_argument("continuity_xi needs delta > 0");
  long long m = net.input_support() * net.output_support();
  double target = delta_star / 2.0;
  // largest xi with modulus(sqrt(2 xi)) <= target; the modulus is increasing,
  // so bracket a feasible xi first and refine to 1e-9 relative resolution
  double lo = 1.0;
  while (cmi_continuity_modulus(std::sqrt(2.0 * lo), m) > target) {
    lo *= 0.5;
    if (lo < 1e-300) return 0.0;
  }
  double hi = lo;
  while (cmi_continuity_modulus(std::sqrt(2.0 * hi), m) <= target && hi < 1e12) hi *= 2.0;
  while (hi - lo > 1e-9 * hi) {
    double mid = 0.5 * (lo + hi);
    if (cmi_continuity_modulus(std::sqrt(2.0 * mid), m) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double DiscreteCertificate::log_bound(double n) const {
  return prefactor_exponent * std::log(n + 1.0) - n * exponent;
}

double DiscreteCertificate::bound(double n) const {
  double lb = log_bound(n);
  return lb > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(lb);
}

double DiscreteCertificate::smallest_useful_n() const {
  if (exponent <= 0.0) return std::numeric_limits<double>::infinity();
  double hi = 1.0;
  while (log_bound(hi) >= 0.0 && hi < 1e18) hi *= 2.0;
  if (hi >= 1e18) return std::numeric_limits<double>::infinity();
  double lo = hi / 2.0;
  while (hi - lo > 0.5) {
    double mid = 0.5 * (lo + hi);
    if (log_bound(mid) < 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return std::ceil(hi);
}

DiscreteCertificate discrete_certificate(const DiscreteNetwork& net, const RateMatrix& rates,
                                         const OptimizerConfig& cfg) {
  MembershipVerdict verdict = region_margin(net, rates, cfg);
  if (verdict.inside)
    throw std::runtime_error("no certificate: rate inside cut-set bound");
  if (!verdict.certified)
    throw std::runtime_error("no certificate: membership verdict is uncertified");

  DiscreteCertificate cert;
  cert.delta_star = verdict.margin;
  cert.xi = continuity_xi(net, verdict.margin);
  cert.exponent = std::min(cert.xi, cert.delta_star / 2.0);
  long long a = net.input_support() * net.output_support();
  if (a > 64) throw std::runtime_error("alphabet product too large for the certificate prefactor");
  cert.prefactor_exponent = static_cast<int>(a);
  cert.worst_cut = verdict.worst_cut;
  cert.witness_pmf = verdict.witness_pmf;
  return cert;
}

}  // namespace cutset
