#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cutset/bigint.hpp"
#include "cutset/net_model.hpp"
#include "cutset/region.hpp"

namespace cutset {

// Empirical distribution of a length-n sequence; pmf entries are multiples of 1/n.
struct TypeHistogram {
  int alphabet_size = 0;
  int n = 0;
  std::vector<long long> counts;

  std::vector<double> pmf() const;
};

TypeHistogram type_of(std::span<const int> sequence, int alphabet_size);

struct TypeCount {
  BigUint exact;        // C(n+m-1, m-1)
  BigUint upper_bound;  // (n+1)^m
};

TypeCount count_types(long long n, int alphabet_size);

// Exponent a such that prod_k q(y_k|x_k) = e^{-n a} for any pair of joint
// type r*s; a = H_{rs}(Y|X) + D(s||q|r). Infinite when q vanishes on the
// support of r*s.
double product_probability_exponent(const std::vector<double>& r, const std::vector<double>& s,
                                    const std::vector<double>& q, int x_size, int y_size);

// Certified L1 modulus of continuity for conditional mutual information on a
// joint support of size m: each of the three entropy terms moves by at most
// d log m + h_b(min(d, 1/2)).
double cmi_continuity_modulus(double l1_distance, long long joint_support);

// Largest xi (bisection, 1e-9 resolution) such that joints within L1 radius
// sqrt(2 xi) keep every cut CMI within delta/2.
double continuity_xi(const DiscreteNetwork& net, double delta_star);

struct DiscreteCertificate {
  double delta_star = 0.0;   // region margin
  double xi = 0.0;           // continuity radius
  double exponent = 0.0;     // E = min(xi, delta_star / 2)
  int prefactor_exponent = 0;  // a: bound is (n+1)^a e^{-nE}
  std::uint32_t worst_cut = 0;
  std::vector<double> witness_pmf;

  double log_bound(double n) const;  // log of (n+1)^a e^{-nE}
  double bound(double n) const;
  double smallest_useful_n() const;  // first n with bound < 1
};

DiscreteCertificate discrete_certificate(const DiscreteNetwork& net, const RateMatrix& rates,
                                         const OptimizerConfig& cfg = {});

}  // namespace cutset
