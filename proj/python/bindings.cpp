#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cutset/report.hpp"

namespace py = pybind11;
using namespace cutset;

namespace {

Cut make_cut(std::uint32_t mask, int n_nodes) { return Cut{mask, n_nodes}; }

py::dict verdict_dict(const MembershipVerdict& v) {
  py::dict d;
  d["inside"] = v.inside;
  d["certified"] = v.certified;
  d["margin"] = v.margin;
  d["worst_cut"] = v.worst_cut;
  if (!v.witness_pmf.empty()) d["witness_pmf"] = v.witness_pmf;
  if (v.witness_cov.size() > 0) d["witness_cov"] = v.witness_cov;
  return d;
}

py::dict row_dict(const SimRow& r) {
  py::dict d;
  d["rate_id"] = r.rate_id;
  d["family"] = r.family;
  d["n"] = r.block_len;
  d["trials"] = r.trials;
  d["errors"] = r.errors;
  d["eps_hat"] = r.eps_hat;
  d["ci_lo"] = r.ci_lo;
  d["ci_hi"] = r.ci_hi;
  d["bound"] = r.bound;
  d["seed"] = r.seed;
  return d;
}

OptimizerConfig config_from_kwargs(int restarts, int max_iters, double tol, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iters = max_iters;
  cfg.tol = tol;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cut-set bounds, strong-converse certificates, and code simulation";

  py::class_<DiscreteNetwork, std::shared_ptr<DiscreteNetwork>>(m, "DiscreteNetwork")
      .def(py::init<std::vector<int>, std::vector<int>, std::vector<double>>(),
           py::arg("input_sizes"), py::arg("output_sizes"), py::arg("channel"))
      .def_property_readonly("node_count", &DiscreteNetwork::node_count)
      .def_property_readonly("input_sizes", &DiscreteNetwork::input_sizes)
      .def_property_readonly("output_sizes", &DiscreteNetwork::output_sizes)
      .def_property_readonly("channel", &DiscreteNetwork::channel)
      .def("__repr__", [](const DiscreteNetwork& n) {
        return "<DiscreteNetwork N=" + std::to_string(n.node_count()) + ">";
      });

  py::class_<GaussianNetwork, std::shared_ptr<GaussianNetwork>>(m, "GaussianNetwork")
      .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("gain"),
           py::arg("noise_cov"), py::arg("power"))
      .def_property_readonly("node_count", &GaussianNetwork::node_count)
      .def_property_readonly("gain", &GaussianNetwork::gain)
      .def_property_readonly("noise_cov", &GaussianNetwork::noise_cov)
      .def_property_readonly("power", &GaussianNetwork::power)
      .def_property_readonly("g_max", &GaussianNetwork::g_max)
      .def_property_readonly("sigma_min", &GaussianNetwork::sigma_min)
      .def_property_readonly("p_min", &GaussianNetwork::p_min)
      .def_property_readonly("p_max", &GaussianNetwork::p_max)
      .def("__repr__", [](const GaussianNetwork& n) {
        return "<GaussianNetwork N=" + std::to_string(n.node_count()) + ">";
      });

  m.def("load_network", [](const std::string& text) -> py::object {
    LoadedNetwork net = load_network(text);
    if (net.kind == NetworkKind::Discrete) return py::cast(net.discrete);
    return py::cast(net.gaussian);
  });
  m.def("serialize_network", [](py::object net) {
    LoadedNetwork ln;
    if (py::isinstance<DiscreteNetwork>(net)) {
      ln.kind = NetworkKind::Discrete;
      ln.discrete = net.cast<std::shared_ptr<DiscreteNetwork>>();
    } else {
      ln.kind = NetworkKind::Gaussian;
      ln.gaussian = net.cast<std::shared_ptr<GaussianNetwork>>();
    }
    return serialize_network(ln);
  });

  m.def("marginalize_channel",
        [](const DiscreteNetwork& net, std::uint32_t cut_mask) {
          MarginalChannel mc = marginalize_channel(net, make_cut(cut_mask, net.node_count()));
          py::dict d;
          d["output_nodes"] = mc.output_nodes;
          d["output_sizes"] = mc.output_sizes;
          d["probs"] = mc.probs;
          return d;
        },
        py::arg("net"), py::arg("cut_mask"));

  m.def("entropy", [](const std::vector<double>& p) { return entropy(p); });
  m.def("pinsker_radius", &pinsker_radius);
  m.def("kl_divergence_conditional",
        [](const std::vector<double>& s, const std::vector<double>& q,
           const std::vector<double>& r, int x_size, int y_size) {
          auto out = kl_divergence_conditional(s, q, r, x_size, y_size);
          return py::make_tuple(out.nats, out.absolutely_continuous);
        });
  m.def("conditional_mutual_information",
        [](const std::vector<int>& support, const std::vector<double>& probs,
           std::uint32_t cut_mask, int n_nodes) {
          JointPmf joint{support, probs};
          joint.validate();
          return conditional_mutual_information(joint, make_cut(cut_mask, n_nodes));
        });

  m.def("schur_conditional_covariance",
        [](const Eigen::MatrixXd& k, std::uint32_t cut_mask) {
          return schur_conditional_covariance(k, make_cut(cut_mask, static_cast<int>(k.rows())));
        });
  m.def("gaussian_cut_value",
        [](const GaussianNetwork& net, const Eigen::MatrixXd& k, std::uint32_t cut_mask) {
          return gaussian_cut_value(net, k, make_cut(cut_mask, net.node_count()));
        });

  m.def("cut_value_discrete",
        [](const DiscreteNetwork& net, const std::vector<double>& p, std::uint32_t cut_mask) {
          return cut_value_discrete(net, p, make_cut(cut_mask, net.node_count()));
        });
  m.def("all_cut_values",
        [](const DiscreteNetwork& net, const std::vector<double>& p) {
          return all_cut_values(net, p);
        });
  m.def("all_cut_values_gaussian",
        [](const GaussianNetwork& net, const Eigen::MatrixXd& k) {
          return all_cut_values(net, k);
        });

  auto margin_impl = [](py::object net, const Eigen::MatrixXd& rates, bool outer, int restarts,
                        int max_iters, double tol, std::uint64_t seed) {
    OptimizerConfig cfg = config_from_kwargs(restarts, max_iters, tol, seed);
    RateMatrix r{rates};
    RegionAnalysis a;
    if (py::isinstance<DiscreteNetwork>(net))
      a = analyze_region(net.cast<const DiscreteNetwork&>(), r, cfg);
    else
      a = analyze_region(net.cast<const GaussianNetwork&>(), r, cfg);
    return verdict_dict(outer ? a.outer : a.cutset);
  };
  m.def("region_margin", [margin_impl](py::object net, const Eigen::MatrixXd& rates, int restarts,
                                       int max_iters, double tol, std::uint64_t seed) {
          return margin_impl(net, rates, false, restarts, max_iters, tol, seed);
        },
        py::arg("net"), py::arg("rates"), py::arg("restarts") = 32, py::arg("max_iters") = 300,
        py::arg("tol") = 1e-6, py::arg("seed") = 1);
  m.def("outer_region_margin",
        [margin_impl](py::object net, const Eigen::MatrixXd& rates, int restarts, int max_iters,
                      double tol, std::uint64_t seed) {
          return margin_impl(net, rates, true, restarts, max_iters, tol, seed);
        },
        py::arg("net"), py::arg("rates"), py::arg("restarts") = 32, py::arg("max_iters") = 300,
        py::arg("tol") = 1e-6, py::arg("seed") = 1);

  m.def("type_of", [](const std::vector<int>& seq, int alphabet) {
    return type_of(seq, alphabet).counts;
  });
  m.def("count_types", [](long long n, int m_size) {
    TypeCount tc = count_types(n, m_size);
    return py::make_tuple(tc.exact.to_string(), tc.upper_bound.to_string());
  });
  m.def("product_probability_exponent", &product_probability_exponent);
  m.def("cmi_continuity_modulus", &cmi_continuity_modulus);
  m.def("continuity_xi", &continuity_xi);

  m.def("discrete_certificate",
        [](const DiscreteNetwork& net, const Eigen::MatrixXd& rates, int restarts,
           std::uint64_t seed, const std::vector<double>& n_samples) {
          OptimizerConfig cfg = config_from_kwargs(restarts, 300, 1e-6, seed);
          DiscreteCertificate cert = discrete_certificate(net, RateMatrix(rates), cfg);
          py::dict d;
          d["delta_star"] = cert.delta_star;
          d["xi"] = cert.xi;
          d["exponent"] = cert.exponent;
          d["prefactor_exponent"] = cert.prefactor_exponent;
          d["n0"] = cert.smallest_useful_n();
          py::list samples;
          for (double n : n_samples)
            samples.append(py::make_tuple(n, cert.log_bound(n)));
          d["bound_samples"] = samples;
          return d;
        },
        py::arg("net"), py::arg("rates"), py::arg("restarts") = 32, py::arg("seed") = 1,
        py::arg("n_samples") = std::vector<double>{});

  m.def("gaussian_certificate",
        [](const GaussianNetwork& net, const Eigen::MatrixXd& rates, int restarts, int max_iters,
           std::uint64_t seed, const std::vector<double>& n_samples) {
          OptimizerConfig cfg = config_from_kwargs(restarts, max_iters, 1e-6, seed);
          GaussianCertificate cert = gaussian_certificate(net, RateMatrix(rates), cfg);
          py::dict d;
          d["delta"] = cert.delta;
          d["eta"] = cert.eta;
          d["tau"] = cert.tau;
          d["gamma"] = cert.gamma;
          d["margin_enlarged"] = cert.margin_enlarged;
          d["n_min_valid"] = cert.n_min_valid;
          d["n0"] = cert.smallest_useful_n();
          py::list samples;
          for (double n : n_samples)
            samples.append(py::make_tuple(n, cert.log_bound(n)));
          d["bound_samples"] = samples;
          return d;
        },
        py::arg("net"), py::arg("rates"), py::arg("restarts") = 8, py::arg("max_iters") = 120,
        py::arg("seed") = 1, py::arg("n_samples") = std::vector<double>{});

  m.def("empirical_correlation", &empirical_correlation);
  m.def("gaussian_type", [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return gaussian_type(x, y).m;
  });
  m.def("in_gamma", &in_gamma);
  m.def("typical_set_check",
        [](const Eigen::MatrixXd& block, double delta, const GaussianNetwork& net) {
          return typical_set_check(GaussianTypeBlock{block}, delta, net);
        });
  m.def("quantize", &quantize);
  m.def("quantizer_count_bound", [](double spacing, const Eigen::VectorXd& power) {
    return quantizer_count_bound(spacing, power).to_string();
  });
  m.def("noise_tail_tau", &noise_tail_tau);
  m.def("cross_tail_tau", &cross_tail_tau);
  m.def("gaussian_eta", &gaussian_eta);
  m.def("gaussian_kappa", &gaussian_kappa);
  m.def("mgf_martingale_check",
        [](const CausalPolicy& policy, double sigma2, double t, int block_len, long long trials,
           std::uint64_t seed) {
          auto est = mgf_martingale_check(policy, sigma2, t, block_len, trials, seed);
          return py::make_tuple(est.mean, est.std_error);
        });
  m.def("gaussian_product_prob_bound",
        [](const GaussianNetwork& net, std::uint32_t cut_mask, double delta) {
          auto b = gaussian_product_prob_bound(net, make_cut(cut_mask, net.node_count()), delta);
          return py::make_tuple(b.exponent, b.vacuous);
        });

  m.def("simulate_random_code",
        [](const DiscreteNetwork& net, double rate, int block_len, long long trials,
           std::uint64_t seed) {
          DiscreteCode code = random_code_ptp(net, rate, block_len, seed);
          return row_dict(run_dmn(net, code, trials, seed));
        },
        py::arg("net"), py::arg("rate"), py::arg("n"), py::arg("trials"), py::arg("seed") = 1);
  m.def("simulate_repetition",
        [](const DiscreteNetwork& net, int block_len, long long trials, std::uint64_t seed) {
          return row_dict(run_dmn(net, repetition_code(net, block_len), trials, seed));
        },
        py::arg("net"), py::arg("n"), py::arg("trials"), py::arg("seed") = 1);
  m.def("simulate_antipodal",
        [](const GaussianNetwork& net, int block_len, long long trials, std::uint64_t seed) {
          return row_dict(run_gaussian(net, antipodal_code(net, block_len), trials, seed));
        },
        py::arg("net"), py::arg("n"), py::arg("trials"), py::arg("seed") = 1);
  m.def("simulate_gaussian_random",
        [](const GaussianNetwork& net, double rate, int block_len, long long trials,
           std::uint64_t seed) {
          GaussianCode code = gaussian_random_code(net, rate, block_len, seed);
          return row_dict(run_gaussian(net, code, trials, seed));
        },
        py::arg("net"), py::arg("rate"), py::arg("n"), py::arg("trials"), py::arg("seed") = 1);

  m.def("phase_transition_sweep",
        [](py::object net, const Eigen::MatrixXd& rates, const std::vector<int>& n_values,
           long long trials, std::uint64_t seed, const std::string& family, int restarts) {
          SweepSpec spec;
          spec.n_values = n_values;
          spec.trials = trials;
          spec.seed = seed;
          spec.family = family;
          OptimizerConfig cfg = config_from_kwargs(restarts, 120, 1e-6, seed);
          SweepResult res;
          if (py::isinstance<DiscreteNetwork>(net))
            res = phase_transition_sweep(net.cast<const DiscreteNetwork&>(), RateMatrix(rates),
                                         spec, cfg);
          else
            res = phase_transition_sweep(net.cast<const GaussianNetwork&>(), RateMatrix(rates),
                                         spec, cfg);
          py::list rows;
          for (const auto& row : res.report.rows) rows.append(row_dict(row));
          py::dict d;
          d["rows"] = rows;
          d["has_certificate"] = res.has_certificate;
          return d;
        },
        py::arg("net"), py::arg("rates"), py::arg("n_values"), py::arg("trials") = 10000,
        py::arg("seed") = 1, py::arg("family") = "random", py::arg("restarts") = 8);

  m.attr("__version__") = "1.0.0";
}
