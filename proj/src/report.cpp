#include "cutset/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cutset {

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

double sig9(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

double nats_display(double v, bool bits) { return sig9(bits ? v / std::log(2.0) : v); }

Json report_header(const std::string& command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = kToolVersion;
  j["command"] = command;
  return j;
}

Json verdict_json(const MembershipVerdict& v, bool bits) {
  Json j;
  j["inside"] = v.inside;
  j["certified"] = v.certified;
  j["margin"] = nats_display(v.margin, bits);
  j["worst_cut"] = v.worst_cut;
  if (!v.witness_pmf.empty()) {
    Json w = Json::array();
    for (double p : v.witness_pmf) w.push_back(sig9(p));
    j["witness_pmf"] = w;
  }
  if (v.witness_cov.size() > 0) {
    Json w = Json::array();
    for (int r = 0; r < v.witness_cov.rows(); ++r)
      for (int c = 0; c < v.witness_cov.cols(); ++c) w.push_back(sig9(v.witness_cov(r, c)));
    j["witness_cov"] = w;
  }
  j["grid_ran"] = v.grid_ran;
  if (v.grid_ran) j["grid_step"] = sig9(v.grid_step_used);
  return j;
}

namespace {

Json bound_samples(const std::vector<double>& n_samples, const std::function<double(double)>& lb) {
  Json arr = Json::array();
  for (double n : n_samples) {
    Json row;
    row["n"] = n;
    double l = lb(n);
    row["log_bound"] = sig9(l);
    row["bound"] = l > 700.0 ? Json("inf") : Json(sig9(std::exp(l)));
    arr.push_back(row);
  }
  return arr;
}

}  // namespace

Json discrete_certificate_json(const DiscreteCertificate& c, const std::vector<double>& n_samples,
                               bool bits) {
  Json j;
  j["kind"] = "discrete";
  j["delta_star"] = nats_display(c.delta_star, bits);
  j["xi"] = nats_display(c.xi, bits);
  j["exponent"] = nats_display(c.exponent, bits);
  j["prefactor_exponent"] = c.prefactor_exponent;
  j["worst_cut"] = c.worst_cut;
  j["n0"] = c.smallest_useful_n();
  j["bound_samples"] = bound_samples(n_samples, [&](double n) { return c.log_bound(n); });
  return j;
}

Json gaussian_certificate_json(const GaussianCertificate& c, const std::vector<double>& n_samples,
                               bool bits) {
  Json j;
  j["kind"] = "gaussian";
  j["delta"] = sig9(c.delta);
  j["eta"] = nats_display(c.eta, bits);
  j["tau"] = sig9(c.tau);
  j["gamma"] = sig9(c.gamma);
  j["margin_enlarged"] = nats_display(c.margin_enlarged, bits);
  j["n_min_valid"] = c.n_min_valid;
  if (std::isfinite(c.n_min_valid)) j["kappa_at_n_min"] = sig9(c.kappa(c.n_min_valid));
  j["n0"] = c.smallest_useful_n();
  j["bound_samples"] = bound_samples(n_samples, [&](double n) { return c.log_bound(n); });
  return j;
}

Json sim_report_json(const SimReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json j;
    j["rate_id"] = r.rate_id;
    j["family"] = r.family;
    j["n"] = r.block_len;
    j["trials"] = r.trials;
    j["errors"] = r.errors;
    j["eps_hat"] = sig9(r.eps_hat);
    j["ci_lo"] = sig9(r.ci_lo);
    j["ci_hi"] = sig9(r.ci_hi);
    if (std::isfinite(r.bound))
      j["bound"] = sig9(r.bound);
    else if (!std::isnan(r.bound))
      j["bound"] = "inf";
    j["seed"] = r.seed;
    j["wall_time_s"] = sig9(r.wall_time_s);
    rows.push_back(j);
  }
  Json j;
  j["rows"] = rows;
  return j;
}

std::string sim_report_csv(const SimReport& report) {
  std::ostringstream os;
  os << "rate_id,n,trials,errors,eps_hat,ci_lo,ci_hi,bound\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    os << buf;
  };
  for (const auto& r : report.rows) {
    os << r.rate_id << ',' << r.block_len << ',' << r.trials << ',' << r.errors << ',';
    put(r.eps_hat);
    os << ',';
    put(r.ci_lo);
    os << ',';
    put(r.ci_hi);
    os << ',';
    if (std::isnan(r.bound))
      os << "";
    else
      put(r.bound);
    os << '\n';
  }
  return os.str();
}

}  // namespace cutset
