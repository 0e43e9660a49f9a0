// cutset: cut-set outer bounds, strong-converse exponent certificates, and
// Monte Carlo phase-transition experiments for small multimessage networks.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cutset/report.hpp"

namespace {

using namespace cutset;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct InputFile {
  std::string path;
  std::string text;
};

InputFile slurp(const std::string& path) { return {path, read_file(path)}; }

void add_input(Json& report, const char* name, const InputFile& f) {
  report["inputs"][name] = {{"path", f.path}, {"digest", fnv1a_digest(f.text)}};
}

std::string echo_command(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

void finish(Json& report, std::chrono::steady_clock::time_point start) {
  report["wall_time_s"] =
      sig9(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  std::cout << report.dump(2) << std::endl;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

int cmd_bound(const std::string& net_path, const std::string& dist_path,
              const std::string& cov_path, int cut_mask, bool bits, const std::string& command) {
  auto start = std::chrono::steady_clock::now();
  InputFile nf = slurp(net_path);
  LoadedNetwork net = load_network(nf.text);
  Json report = report_header(command);
  add_input(report, "network", nf);

  int n = net.kind == NetworkKind::Discrete ? net.discrete->node_count()
                                            : net.gaussian->node_count();
  std::vector<double> values;
  if (net.kind == NetworkKind::Discrete) {
    if (dist_path.empty()) throw std::runtime_error("discrete networks need --dist");
    InputFile df = slurp(dist_path);
    add_input(report, "dist", df);
    std::vector<double> p = load_dist(df.text, net.discrete->input_support());
    values = all_cut_values(*net.discrete, p);
  } else {
    if (cov_path.empty()) throw std::runtime_error("gaussian networks need --cov");
    InputFile cf = slurp(cov_path);
    add_input(report, "cov", cf);
    Eigen::MatrixXd k = load_cov(cf.text, n);
    validate_covariance(k);
    values = all_cut_values(*net.gaussian, k);
  }

  Json cuts = Json::array();
  for (std::uint32_t mask = 0; mask < values.size(); ++mask) {
    if (cut_mask >= 0 && static_cast<std::uint32_t>(cut_mask) != mask) continue;
    Json row;
    row["cut"] = mask;
    row["value"] = nats_display(values[mask], bits);
    cuts.push_back(row);
  }
  report["cuts"] = cuts;
  report["units"] = bits ? "bits" : "nats";
  finish(report, start);
  return 0;
}

int cmd_membership(const std::string& net_path, const std::string& rates_path, int restarts,
                   double tol, std::uint64_t seed, bool bits, const std::string& command) {
  auto start = std::chrono::steady_clock::now();
  InputFile nf = slurp(net_path), rf = slurp(rates_path);
  LoadedNetwork net = load_network(nf.text);
  int n = net.kind == NetworkKind::Discrete ? net.discrete->node_count()
                                            : net.gaussian->node_count();
  RateMatrix rates = load_rates(rf.text, n);
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.tol = tol;
  cfg.seed = seed;

  MembershipVerdict v = net.kind == NetworkKind::Discrete
                            ? region_margin(*net.discrete, rates, cfg)
                            : region_margin(*net.gaussian, rates, cfg);
  Json report = report_header(command);
  add_input(report, "network", nf);
  add_input(report, "rates", rf);
  report["verdict"] = verdict_json(v, bits);
  finish(report, start);
  if (v.inside) return 0;
  return v.certified ? 1 : 2;
}

int cmd_exponent(const std::string& net_path, const std::string& rates_path,
                 const std::string& n_samples_csv, int restarts, std::uint64_t seed, bool bits,
                 const std::string& command) {
  auto start = std::chrono::steady_clock::now();
  InputFile nf = slurp(net_path), rf = slurp(rates_path);
  LoadedNetwork net = load_network(nf.text);
  int n = net.kind == NetworkKind::Discrete ? net.discrete->node_count()
                                            : net.gaussian->node_count();
  RateMatrix rates = load_rates(rf.text, n);
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  std::vector<double> samples = parse_double_list(n_samples_csv);

  Json report = report_header(command);
  add_input(report, "network", nf);
  add_input(report, "rates", rf);
  try {
    if (net.kind == NetworkKind::Discrete) {
      DiscreteCertificate cert = discrete_certificate(*net.discrete, rates, cfg);
      report["certificate"] = discrete_certificate_json(cert, samples, bits);
    } else {
      GaussianCertificate cert = gaussian_certificate(*net.gaussian, rates, cfg);
      report["certificate"] = gaussian_certificate_json(cert, samples, bits);
    }
  } catch (const std::runtime_error& e) {
    report["error"] = e.what();
    finish(report, start);
    return 3;
  }
  finish(report, start);
  return 0;
}

int cmd_simulate(const std::string& net_path, const std::string& rates_path,
                 const std::string& family, const std::string& n_csv, long long trials,
                 std::uint64_t seed, int restarts, const std::string& csv_path,
                 const std::string& command) {
  auto start = std::chrono::steady_clock::now();
  InputFile nf = slurp(net_path), rf = slurp(rates_path);
  LoadedNetwork net = load_network(nf.text);
  int n = net.kind == NetworkKind::Discrete ? net.discrete->node_count()
                                            : net.gaussian->node_count();
  RateMatrix rates = load_rates(rf.text, n);

  SweepSpec spec;
  spec.n_values = parse_int_list(n_csv);
  spec.trials = trials;
  spec.seed = seed;
  spec.family = family;
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;

  SweepResult result = net.kind == NetworkKind::Discrete
                           ? phase_transition_sweep(*net.discrete, rates, spec, cfg)
                           : phase_transition_sweep(*net.gaussian, rates, spec, cfg);

  Json report = report_header(command);
  add_input(report, "network", nf);
  add_input(report, "rates", rf);
  report["simulation"] = sim_report_json(result.report);
  report["has_certificate"] = result.has_certificate;
  if (result.discrete_cert)
    report["certificate"] = discrete_certificate_json(*result.discrete_cert, {}, false);
  if (result.gaussian_cert)
    report["certificate"] = gaussian_certificate_json(*result.gaussian_cert, {}, false);

  std::string csv = sim_report_csv(result.report);
  if (!csv_path.empty()) {
    if (csv_path == "-") {
      std::cerr << csv;
    } else {
      std::ofstream out(csv_path);
      out << csv;
    }
    report["csv"] = csv_path;
  }
  finish(report, start);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cut-set bounds, strong-converse certificates, and code simulation"};
  app.require_subcommand(1);
  std::string command = echo_command(argc, argv);

  std::string net_path, rates_path, dist_path, cov_path, csv_path;
  std::string n_csv = "8", n_samples_csv = "", family = "random";
  int cut_mask = -1, restarts = 32;
  long long trials = 10000;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  bool bits = false;

  auto* bound = app.add_subcommand("bound", "cut values under a fixed input witness");
  bound->add_option("--network", net_path)->required();
  bound->add_option("--dist", dist_path);
  bound->add_option("--cov", cov_path);
  bound->add_option("--cut", cut_mask);
  bound->add_flag("--bits", bits, "display in bits (internal math stays in nats)");

  auto* membership = app.add_subcommand("membership", "rate-vector membership with signed margin");
  membership->add_option("--network", net_path)->required();
  membership->add_option("--rates", rates_path)->required();
  membership->add_option("--restarts", restarts);
  membership->add_option("--tol", tol);
  membership->add_option("--seed", seed);
  membership->add_flag("--bits", bits);

  auto* exponent = app.add_subcommand("exponent", "strong-converse exponent certificate");
  exponent->add_option("--network", net_path)->required();
  exponent->add_option("--rates", rates_path)->required();
  exponent->add_option("--n-samples", n_samples_csv, "comma-separated n values for the bound");
  exponent->add_option("--restarts", restarts);
  exponent->add_option("--seed", seed);
  exponent->add_flag("--bits", bits);

  auto add_sim_options = [&](CLI::App* cmd) {
    cmd->add_option("--network", net_path)->required();
    cmd->add_option("--rates", rates_path)->required();
    cmd->add_option("--code", family, "random | repetition | antipodal | gaussian-random");
    cmd->add_option("--n", n_csv, "comma-separated blocklengths");
    cmd->add_option("--trials", trials);
    cmd->add_option("--seed", seed);
    cmd->add_option("--restarts", restarts);
    cmd->add_option("--csv", csv_path, "CSV output path ('-' for stderr)");
  };
  add_sim_options(app.add_subcommand("simulate", "Monte Carlo run of a code family"));
  add_sim_options(app.add_subcommand("sweep", "phase-transition sweep with certificate overlay"));

  CLI11_PARSE(app, argc, argv);

  try {
    if (bound->parsed()) return cmd_bound(net_path, dist_path, cov_path, cut_mask, bits, command);
    if (membership->parsed())
      return cmd_membership(net_path, rates_path, restarts, tol, seed, bits, command);
    if (exponent->parsed())
      return cmd_exponent(net_path, rates_path, n_samples_csv, restarts, seed, bits, command);
    return cmd_simulate(net_path, rates_path, family, n_csv, trials, seed, restarts, csv_path,
                        command);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
}
