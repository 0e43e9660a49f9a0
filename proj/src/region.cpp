#include "cutset/region.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "cutset/rng.hpp"

namespace cutset {

namespace {

constexpr double kTieTol = 1e-9;

// index-parallel loop; each task writes its own slot, so the reduction over
// slots stays deterministic regardless of thread count
template <typename F>
void parallel_for(int count, F&& fn) {
  unsigned workers = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                        static_cast<unsigned>(std::max(count, 1)));
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w)
    threads.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

// ---- discrete fast path ---------------------------------------------------

// Per-cut precomputation over the dense channel so the optimizer can evaluate
// every cut value in one pass over the input pmf.
struct DiscreteCutTables {
  struct PerCut {
    std::vector<double> q;         // (x, y) with y over T^c outputs
    std::vector<double> cond_ent;  // per x: -sum_y q log q
    std::vector<int> xtc_index;    // x -> flat index of x_{T^c}
    long long y_size = 1;
    long long xtc_size = 1;
  };

  explicit DiscreteCutTables(const DiscreteNetwork& net) {
    n = net.node_count();
    if (n > 16) throw std::invalid_argument("cut enumeration capped at 16 nodes");
    dim = net.input_support();
    cuts.resize(1u << n);
    for (std::uint32_t mask = 0; mask < cuts.size(); ++mask) {
      Cut T{mask, n};
      auto& pc = cuts[mask];
      MarginalChannel mc = marginalize_channel(net, T);
      pc.y_size = mc.output_support();
      pc.q = std::move(mc.probs);
      pc.cond_ent.assign(dim, 0.0);
      for (long long x = 0; x < dim; ++x)
        for (long long y = 0; y < pc.y_size; ++y) {
          double v = pc.q[x * pc.y_size + y];
          if (v > 0.0) pc.cond_ent[x] -= v * std::log(v);
        }
      // sub-index of x over the complement inputs
      std::vector<int> tc = T.complement_members();
      pc.xtc_size = 1;
      for (int node : tc) pc.xtc_size *= net.input_sizes()[node];
      pc.xtc_index.assign(dim, 0);
      MixedRadix radix{net.input_sizes()};
      std::vector<int> digits(n, 0);
      long long x = 0;
      do {
        long long idx = 0;
        for (int node : tc) idx = idx * net.input_sizes()[node] + digits[node];
        pc.xtc_index[x] = static_cast<int>(idx);
        ++x;
      } while (radix.next(digits));
    }
  }

  double value(const std::vector<double>& p, std::uint32_t mask, std::vector<double>* grad,
               std::vector<double>* scratch_b, std::vector<double>* scratch_a) const {
    const auto& pc = cuts[mask];
    if (mask == 0 || mask + 1 == cuts.size()) {  // trivial cuts
      if (grad) std::fill(grad->begin(), grad->end(), 0.0);
      return 0.0;
    }
    auto& b = *scratch_b;
    auto& a = *scratch_a;
    b.assign(pc.xtc_size * pc.y_size, 0.0);
    a.assign(pc.xtc_size, 0.0);
    double h_y_given_x = 0.0;
    for (long long x = 0; x < dim; ++x) {
      double px = p[x];
      h_y_given_x += px * pc.cond_ent[x];
      if (px == 0.0) continue;
      double* brow = b.data() + static_cast<long long>(pc.xtc_index[x]) * pc.y_size;
      const double* qrow = pc.q.data() + x * pc.y_size;
      for (long long y = 0; y < pc.y_size; ++y) brow[y] += px * qrow[y];
      a[pc.xtc_index[x]] += px;
    }
    double h_y_given_xtc = 0.0;
    for (long long i = 0; i < pc.xtc_size; ++i) {
      for (long long y = 0; y < pc.y_size; ++y) {
        double v = b[i * pc.y_size + y];
        if (v > 0.0) h_y_given_xtc -= v * std::log(v);
      }
      if (a[i] > 0.0) h_y_given_xtc += a[i] * std::log(a[i]);
    }
    double value = h_y_given_xtc - h_y_given_x;
    if (value < 0.0 && value > -1e-12) value = 0.0;

    if (grad) {
      for (long long x = 0; x < dim; ++x) {
        const double* qrow = pc.q.data() + x * pc.y_size;
        const double* brow = b.data() + static_cast<long long>(pc.xtc_index[x]) * pc.y_size;
        double g = 0.0;
        for (long long y = 0; y < pc.y_size; ++y)
          if (qrow[y] > 0.0) g += qrow[y] * (std::log(qrow[y]) - std::log(std::max(brow[y], 1e-300)));
        g += std::log(std::max(a[pc.xtc_index[x]], 1e-300));
        (*grad)[x] = g;
      }
    }
    return value;
  }

  void values(const std::vector<double>& p, std::vector<double>& out) const {
    std::vector<double> b, a;
    out.resize(cuts.size());
    for (std::uint32_t mask = 0; mask < cuts.size(); ++mask)
      out[mask] = value(p, mask, nullptr, &b, &a);
  }

  int n = 0;
  long long dim = 0;
  std::vector<PerCut> cuts;
};

void project_to_simplex(std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  (void)rho;
  double sum = 0.0;
  for (auto& x : v) {
    x = std::max(x - theta, 0.0);
    sum += x;
  }
  if (sum <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
  } else {
    for (auto& x : v) x /= sum;
  }
}

// margin of one witness: max over cuts of (rate sum - cut value);
// strict comparison keeps the lowest mask among exact ties
double witness_margin(const std::vector<double>& cut_values, const std::vector<double>& rate_sums,
                      std::uint32_t* worst) {
  double best = -1e300;
  std::uint32_t arg = 0;
  for (std::uint32_t mask = 0; mask < cut_values.size(); ++mask) {
    double term = rate_sums[mask] - cut_values[mask];
    if (term > best) {
      best = term;
      arg = mask;
    }
  }
  if (worst) *worst = arg;
  return best;
}

// ---- shared pool reduction ------------------------------------------------

struct PoolReduction {
  double cutset_margin = 1e300;
  std::size_t cutset_witness = 0;
  std::uint32_t cutset_worst = 0;
  std::vector<double> per_cut_best;  // max cut value seen, per mask
  std::vector<std::size_t> per_cut_witness;

  void init(std::size_t n_cuts) {
    per_cut_best.assign(n_cuts, -1e300);
    per_cut_witness.assign(n_cuts, 0);
  }

  void absorb(std::size_t witness_id, const std::vector<double>& cut_values,
              const std::vector<double>& rate_sums) {
    std::uint32_t worst = 0;
    double m = witness_margin(cut_values, rate_sums, &worst);
    if (m < cutset_margin) {
      cutset_margin = m;
      cutset_witness = witness_id;
      cutset_worst = worst;
    }
    for (std::uint32_t mask = 0; mask < cut_values.size(); ++mask)
      if (cut_values[mask] > per_cut_best[mask]) {
        per_cut_best[mask] = cut_values[mask];
        per_cut_witness[mask] = witness_id;
      }
  }

  double outer_margin(const std::vector<double>& rate_sums, std::uint32_t* worst) const {
    double best = -1e300;
    std::uint32_t arg = 0;
    for (std::uint32_t mask = 0; mask < rate_sums.size(); ++mask) {
      double term = rate_sums[mask] - per_cut_best[mask];
      if (term > best) {
        best = term;
        arg = mask;
      }
    }
    if (worst) *worst = arg;
    return best;
  }
};

std::vector<double> rate_sums_all_cuts(const RateMatrix& rates) {
  int n = rates.node_count();
  std::vector<double> out(1u << n, 0.0);
  for (std::uint32_t mask = 0; mask < out.size(); ++mask)
    out[mask] = rates.cut_rate_sum(Cut{mask, n});
  return out;
}

// enumerate compositions of m into d nonnegative parts (barycentric grid)
template <typename F>
void for_each_composition(int m, int d, F&& f) {
  std::vector<int> c(d, 0);
  c[0] = m;
  std::vector<double> p(d);
  while (true) {
    for (int i = 0; i < d; ++i) p[i] = static_cast<double>(c[i]) / m;
    f(p);
    // next composition in colex order
    int i = 0;
    while (i < d - 1 && c[i] == 0) ++i;
    if (i == d - 1) break;
    int v = c[i];
    c[i] = 0;
    c[i + 1] += 1;
    c[0] = v - 1;
  }
}

long long composition_count(int m, int d) {
  double logc = 0.0;
  for (int i = 1; i < d; ++i)
    logc += std::log(static_cast<double>(m + i)) - std::log(static_cast<double>(i));
  return logc > 60 ? (1LL << 62) : static_cast<long long>(std::exp(logc) + 0.5);
}

}  // namespace

double cut_value_discrete(const DiscreteNetwork& net, const std::vector<double>& p,
                          const Cut& T) {
  if (static_cast<long long>(p.size()) != net.input_support())
    throw std::invalid_argument("input pmf length mismatch");
  MarginalChannel mc = marginalize_channel(net, T);
  JointPmf joint;
  joint.support = net.input_sizes();
  for (int s : mc.output_sizes) joint.support.push_back(s);
  long long ys = mc.output_support();
  joint.probs.resize(p.size() * ys);
  for (long long x = 0; x < static_cast<long long>(p.size()); ++x)
    for (long long y = 0; y < ys; ++y) joint.probs[x * ys + y] = p[x] * mc.prob(x, y);
  return conditional_mutual_information(joint, T);
}

std::vector<double> all_cut_values(const DiscreteNetwork& net, const std::vector<double>& p) {
  DiscreteCutTables tables(net);
  std::vector<double> out;
  tables.values(p, out);
  return out;
}

std::vector<double> all_cut_values(const GaussianNetwork& net, const Eigen::MatrixXd& k) {
  int n = net.node_count();
  std::vector<double> out(1u << n, 0.0);
  for (std::uint32_t mask = 1; mask + 1 < out.size(); ++mask)
    out[mask] = gaussian_cut_value(net, k, Cut{mask, n});
  return out;
}

// ---- discrete analysis ----------------------------------------------------

RegionAnalysis analyze_region(const DiscreteNetwork& net, const RateMatrix& rates,
                              const OptimizerConfig& cfg) {
  if (rates.node_count() != net.node_count())
    throw std::invalid_argument("rate matrix node count mismatch");
  DiscreteCutTables tables(net);
  const long long dim = tables.dim;
  const std::size_t n_cuts = tables.cuts.size();
  std::vector<double> rate_sums = rate_sums_all_cuts(rates);

  const std::vector<double> uniform(dim, 1.0 / static_cast<double>(dim));

  // per-task scratch keeps the parallel restarts independent
  struct Scratch {
    std::vector<double> b, a, grad, sub, values;
  };

  auto ascend_minmax = [&](std::vector<double> p, Scratch& s) {
    // maximize min over cuts of (I_T - S_T) by projected subgradient steps
    s.grad.resize(dim);
    s.sub.resize(dim);
    std::vector<double> best_p = p;
    double best_g = -1e300;
    for (int it = 0; it < cfg.max_iters; ++it) {
      tables.values(p, s.values);
      double g = 1e300;
      for (std::uint32_t mask = 0; mask < n_cuts; ++mask)
        g = std::min(g, s.values[mask] - rate_sums[mask]);
      if (g > best_g) {
        best_g = g;
        best_p = p;
      }
      std::fill(s.sub.begin(), s.sub.end(), 0.0);
      int ties = 0;
      for (std::uint32_t mask = 0; mask < n_cuts; ++mask) {
        if (s.values[mask] - rate_sums[mask] > g + kTieTol) continue;
        if (mask == 0 || mask + 1 == n_cuts) {
          ++ties;  // constant term, zero gradient
          continue;
        }
        tables.value(p, mask, &s.grad, &s.b, &s.a);
        for (long long i = 0; i < dim; ++i) s.sub[i] += s.grad[i];
        ++ties;
      }
      double step = 0.25 / std::sqrt(1.0 + it);
      for (long long i = 0; i < dim; ++i) p[i] += step * s.sub[i] / std::max(ties, 1);
      project_to_simplex(p);
    }
    return best_p;
  };

  auto ascend_single_cut = [&](std::vector<double> p, std::uint32_t mask, Scratch& s) {
    s.grad.resize(dim);
    std::vector<double> best_p = p;
    double best_v = -1e300;
    for (int it = 0; it < cfg.max_iters; ++it) {
      double v = tables.value(p, mask, &s.grad, &s.b, &s.a);
      if (v > best_v) {
        best_v = v;
        best_p = p;
      }
      double step = 0.25 / std::sqrt(1.0 + it);
      for (long long i = 0; i < dim; ++i) p[i] += step * s.grad[i];
      project_to_simplex(p);
    }
    return best_p;
  };

  auto random_pmf = [&](CounterRng& rng) {
    std::vector<double> p(dim);
    double sum = 0.0;
    for (auto& x : p) {
      x = -std::log(std::max(rng.next_unit(), 1e-300));
      sum += x;
    }
    for (auto& x : p) x /= sum;
    return p;
  };

  // restarts run in parallel; the pool order is fixed by task index
  int per_cut_restarts = std::max(2, cfg.restarts / 8);
  struct Task {
    bool minmax;
    std::uint32_t mask;
    int restart;
  };
  std::vector<Task> tasks;
  for (int r = 0; r < cfg.restarts; ++r) tasks.push_back({true, 0, r});
  for (std::uint32_t mask = 1; mask + 1 < n_cuts; ++mask)
    for (int r = 0; r < per_cut_restarts; ++r) tasks.push_back({false, mask, r});

  std::vector<std::vector<double>> pool(tasks.size() + 1);
  pool[0] = uniform;
  parallel_for(static_cast<int>(tasks.size()), [&](int idx) {
    const Task& task = tasks[idx];
    Scratch scratch;
    std::vector<double> start;
    if (task.minmax) {
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(task.restart));
      start = task.restart == 0 ? uniform : random_pmf(rng);
      pool[idx + 1] = ascend_minmax(std::move(start), scratch);
    } else {
      CounterRng rng(cfg.seed ^ 0xabcdef,
                     (static_cast<std::uint64_t>(task.mask) << 16) | task.restart);
      start = task.restart == 0 ? uniform : random_pmf(rng);
      pool[idx + 1] = ascend_single_cut(std::move(start), task.mask, scratch);
    }
  });

  PoolReduction red;
  red.init(n_cuts);
  std::vector<double> values(n_cuts);
  for (std::size_t w = 0; w < pool.size(); ++w) {
    tables.values(pool[w], values);
    red.absorb(w, values, rate_sums);
  }

  // certification grid for two-node networks with small input alphabets
  bool grid_ran = false;
  double grid_step_used = 0.0;
  std::vector<double> grid_best_pmf;
  int max_alphabet = *std::max_element(net.input_sizes().begin(), net.input_sizes().end());
  if (net.node_count() <= 2 && max_alphabet <= 4) {
    int m = std::max(1, static_cast<int>(std::llround(1.0 / cfg.grid_step)));
    while (m > 1 && composition_count(m, static_cast<int>(dim)) > cfg.grid_point_cap) m /= 2;
    if (composition_count(m, static_cast<int>(dim)) <= cfg.grid_point_cap) {
      grid_ran = true;
      grid_step_used = 1.0 / m;
      std::vector<double> gvalues(n_cuts);
      for_each_composition(m, static_cast<int>(dim), [&](const std::vector<double>& p) {
        tables.values(p, gvalues);
        std::uint32_t worst = 0;
        double mg = witness_margin(gvalues, rate_sums, &worst);
        if (mg < red.cutset_margin) {
          red.cutset_margin = mg;
          red.cutset_worst = worst;
          red.cutset_witness = SIZE_MAX;
          grid_best_pmf = p;
        }
        for (std::uint32_t mask = 0; mask < n_cuts; ++mask)
          if (gvalues[mask] > red.per_cut_best[mask]) {
            red.per_cut_best[mask] = gvalues[mask];
            red.per_cut_witness[mask] = SIZE_MAX;
          }
      });
    }
  }

  RegionAnalysis out;
  out.cutset.margin = red.cutset_margin;
  out.cutset.worst_cut = red.cutset_worst;
  out.cutset.inside = red.cutset_margin <= cfg.tol;
  out.cutset.witness_pmf =
      red.cutset_witness == SIZE_MAX ? grid_best_pmf : pool[red.cutset_witness];
  out.cutset.grid_ran = grid_ran;
  out.cutset.grid_step_used = grid_step_used;
  out.cutset.certified = out.cutset.inside || grid_ran;

  std::uint32_t outer_worst = 0;
  out.outer.margin = red.outer_margin(rate_sums, &outer_worst);
  out.outer.worst_cut = outer_worst;
  out.outer.inside = out.outer.margin <= cfg.tol;
  std::size_t ow = red.per_cut_witness[outer_worst];
  out.outer.witness_pmf = ow == SIZE_MAX ? grid_best_pmf : pool[ow];
  out.outer.grid_ran = grid_ran;
  out.outer.grid_step_used = grid_step_used;
  out.outer.certified = out.outer.inside || grid_ran;
  return out;
}

// ---- gaussian analysis ----------------------------------------------------

namespace {

// K = L L^t with the diagonal clipped to the power vector; scaling one row of
// L rescales exactly one diagonal entry of K.
Eigen::MatrixXd assemble_cov(const Eigen::MatrixXd& l, const Eigen::VectorXd& power) {
  Eigen::MatrixXd lc = l;
  for (int i = 0; i < lc.rows(); ++i) {
    double kii = lc.row(i).squaredNorm();
    if (kii > power(i)) lc.row(i) *= std::sqrt(power(i) / kii);
  }
  return lc * lc.transpose();
}

struct GaussianEvaluator {
  const GaussianNetwork& net;
  const std::vector<double>& rate_sums;
  std::size_t n_cuts;

  void values(const Eigen::MatrixXd& k, std::vector<double>& out) const {
    out.assign(n_cuts, 0.0);
    for (std::uint32_t mask = 1; mask + 1 < n_cuts; ++mask)
      out[mask] = gaussian_cut_value(net, k, Cut{mask, net.node_count()});
  }

  double minmax_objective(const Eigen::MatrixXd& k, std::vector<double>& scratch) const {
    values(k, scratch);
    double g = 1e300;
    for (std::uint32_t mask = 0; mask < n_cuts; ++mask)
      g = std::min(g, scratch[mask] - rate_sums[mask]);
    return g;
  }
};

}  // namespace

RegionAnalysis analyze_region(const GaussianNetwork& net, const RateMatrix& rates,
                              const OptimizerConfig& cfg) {
  if (rates.node_count() != net.node_count())
    throw std::invalid_argument("rate matrix node count mismatch");
  const int n = net.node_count();
  if (n > 16) throw std::invalid_argument("cut enumeration capped at 16 nodes");
  const std::size_t n_cuts = 1u << n;
  std::vector<double> rate_sums = rate_sums_all_cuts(rates);
  GaussianEvaluator eval{net, rate_sums, n_cuts};

  const int n_params = n * (n + 1) / 2;
  auto unpack = [&](const Eigen::VectorXd& theta) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) l(i, j) = theta(idx++);
    return l;
  };

  std::vector<Eigen::MatrixXd> pool;
  {
    Eigen::MatrixXd diag_p = net.power().asDiagonal();
    pool.push_back(diag_p);
    pool.push_back(0.5 * diag_p);
    Eigen::VectorXd sq = net.power().cwiseSqrt();
    pool.push_back(sq * sq.transpose());  // fully correlated, diag = P
    pool.push_back(Eigen::MatrixXd::Zero(n, n));
  }

  auto ascend = [&](Eigen::VectorXd theta, auto&& objective) {
    double best = -1e300;
    Eigen::VectorXd best_theta = theta;
    Eigen::VectorXd grad(n_params);
    for (int it = 0; it < cfg.max_iters; ++it) {
      double f0 = objective(theta);
      if (f0 > best) {
        best = f0;
        best_theta = theta;
      }
      for (int pidx = 0; pidx < n_params; ++pidx) {
        double h = 1e-5 * (1.0 + std::abs(theta(pidx)));
        Eigen::VectorXd tp = theta, tm = theta;
        tp(pidx) += h;
        tm(pidx) -= h;
        grad(pidx) = (objective(tp) - objective(tm)) / (2 * h);
      }
      double gn = grad.norm();
      if (gn < 1e-12) break;
      double step = 0.3 / std::sqrt(1.0 + it);
      theta += step * grad / gn;
    }
    return best_theta;
  };

  auto theta_of = [&](const Eigen::MatrixXd& k) {
    Eigen::LLT<Eigen::MatrixXd> llt(k + 1e-12 * Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd l = llt.matrixL();
    Eigen::VectorXd theta(n_params);
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) theta(idx++) = l(i, j);
    return theta;
  };

  // restarts run in parallel; pool slots are fixed by task index
  int per_cut_restarts = std::max(2, cfg.restarts / 8);
  struct Task {
    bool minmax;
    std::uint32_t mask;
    int restart;
  };
  std::vector<Task> tasks;
  for (int r = 0; r < cfg.restarts; ++r) tasks.push_back({true, 0, r});
  for (std::uint32_t mask = 1; mask + 1 < n_cuts; ++mask)
    for (int r = 0; r < per_cut_restarts; ++r) tasks.push_back({false, mask, r});

  const std::size_t fixed = pool.size();
  pool.resize(fixed + tasks.size());
  parallel_for(static_cast<int>(tasks.size()), [&](int idx) {
    const Task& task = tasks[idx];
    std::vector<double> scratch(n_cuts);
    Eigen::VectorXd theta(n_params);
    if (task.minmax) {
      CounterRng rng(cfg.seed, 0x6a00 + static_cast<std::uint64_t>(task.restart));
      if (task.restart == 0) {
        theta = theta_of(pool[0]);
      } else {
        for (int i = 0; i < n_params; ++i)
          theta(i) = rng.next_gaussian() * std::sqrt(net.p_max());
      }
      auto objective = [&](const Eigen::VectorXd& t) {
        return eval.minmax_objective(assemble_cov(unpack(t), net.power()), scratch);
      };
      pool[fixed + idx] = assemble_cov(unpack(ascend(theta, objective)), net.power());
    } else {
      CounterRng rng(cfg.seed ^ 0xfeed,
                     (static_cast<std::uint64_t>(task.mask) << 16) | task.restart);
      if (task.restart == 0) {
        theta = theta_of(pool[0]);
      } else {
        for (int i = 0; i < n_params; ++i)
          theta(i) = rng.next_gaussian() * std::sqrt(net.p_max());
      }
      auto objective = [&](const Eigen::VectorXd& t) {
        Eigen::MatrixXd k = assemble_cov(unpack(t), net.power());
        return gaussian_cut_value(net, k, Cut{task.mask, n});
      };
      pool[fixed + idx] = assemble_cov(unpack(ascend(theta, objective)), net.power());
    }
  });

  PoolReduction red;
  red.init(n_cuts);
  std::vector<double> values(n_cuts);
  for (std::size_t w = 0; w < pool.size(); ++w) {
    eval.values(pool[w], values);
    red.absorb(w, values, rate_sums);
  }

  // grid corroboration for one- and two-node networks
  bool grid_ran = false;
  double grid_step_used = 0.0;
  Eigen::MatrixXd grid_best;
  if (n <= 2) {
    grid_ran = true;
    int steps = 40;
    grid_step_used = 1.0 / steps;
    auto try_k = [&](const Eigen::MatrixXd& k) {
      eval.values(k, values);
      std::uint32_t worst = 0;
      double mg = witness_margin(values, rate_sums, &worst);
      if (mg < red.cutset_margin) {
        red.cutset_margin = mg;
        red.cutset_worst = worst;
        red.cutset_witness = SIZE_MAX;
        grid_best = k;
      }
      for (std::uint32_t mask = 0; mask < n_cuts; ++mask)
        if (values[mask] > red.per_cut_best[mask]) {
          red.per_cut_best[mask] = values[mask];
          red.per_cut_witness[mask] = SIZE_MAX;
        }
    };
    if (n == 1) {
      for (int i = 0; i <= steps; ++i) {
        Eigen::MatrixXd k(1, 1);
        k(0, 0) = net.power()(0) * i / steps;
        try_k(k);
      }
    } else {
      for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j)
          for (int c = -20; c <= 20; ++c) {
            double k1 = net.power()(0) * i / steps;
            double k2 = net.power()(1) * j / steps;
            double rho = 0.999 * c / 20.0;
            Eigen::MatrixXd k(2, 2);
            k << k1, rho * std::sqrt(k1 * k2), rho * std::sqrt(k1 * k2), k2;
            try_k(k);
          }
    }
  }

  RegionAnalysis out;
  out.cutset.margin = red.cutset_margin;
  out.cutset.worst_cut = red.cutset_worst;
  out.cutset.inside = red.cutset_margin <= cfg.tol;
  out.cutset.witness_cov = red.cutset_witness == SIZE_MAX ? grid_best : pool[red.cutset_witness];
  out.cutset.grid_ran = grid_ran;
  out.cutset.grid_step_used = grid_step_used;
  out.cutset.certified = out.cutset.inside || grid_ran;

  std::uint32_t outer_worst = 0;
  out.outer.margin = red.outer_margin(rate_sums, &outer_worst);
  out.outer.worst_cut = outer_worst;
  out.outer.inside = out.outer.margin <= cfg.tol;
  std::size_t ow = red.per_cut_witness[outer_worst];
  out.outer.witness_cov = ow == SIZE_MAX ? grid_best : pool[ow];
  out.outer.grid_ran = grid_ran;
  out.outer.grid_step_used = grid_step_used;
  out.outer.certified = out.outer.inside || grid_ran;
  return out;
}

MembershipVerdict region_margin(const DiscreteNetwork& net, const RateMatrix& rates,
                                const OptimizerConfig& cfg) {
  return analyze_region(net, rates, cfg).cutset;
}
MembershipVerdict region_margin(const GaussianNetwork& net, const RateMatrix& rates,
                                const OptimizerConfig& cfg) {
  return analyze_region(net, rates, cfg).cutset;
}
MembershipVerdict outer_region_margin(const DiscreteNetwork& net, const RateMatrix& rates,
                                      const OptimizerConfig& cfg) {
  return analyze_region(net, rates, cfg).outer;
}
MembershipVerdict outer_region_margin(const GaussianNetwork& net, const RateMatrix& rates,
                                      const OptimizerConfig& cfg) {
  return analyze_region(net, rates, cfg).outer;
}

}  // namespace cutset
