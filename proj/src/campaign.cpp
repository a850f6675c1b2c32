#include "mh/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "mh/holder.hpp"
#include "mh/rng.hpp"

namespace mh {

namespace {

using nlohmann::json;

constexpr double kIsingMixProbability = 0.2;

struct EnsembleDraw {
  GibbsEnsemble ens;
  HamiltonianKind kind;
  double beta_drawn;
};

HamiltonianKind draw_kind(const CampaignConfig& cfg, int dim, Rng& rng) {
  if (cfg.hamiltonian_kind != "mixed") {
    return hamiltonian_kind_from_string(cfg.hamiltonian_kind);
  }
  const bool power_of_two = dim >= 4 && (dim & (dim - 1)) == 0;
  if (power_of_two && rng.uniform() < kIsingMixProbability) {
    return HamiltonianKind::ising_chain;
  }
  return rng.uniform() < 0.5 ? HamiltonianKind::diagonal : HamiltonianKind::gue;
}

// Draws (H, beta) and clips beta so min eig(rho) stays above rho_min_target.
EnsembleDraw draw_ensemble(const CampaignConfig& cfg, std::uint64_t seed, Rng& rng) {
  int dim = cfg.dims[rng.uniform_int(0, static_cast<int>(cfg.dims.size()) - 1)];
  HamiltonianKind kind = draw_kind(cfg, dim, rng);
  Matrix H;
  if (kind == HamiltonianKind::ising_chain) {
    int sites = 1;
    while ((1 << (sites + 1)) <= dim) ++sites;
    dim = 1 << sites;
    H = gen_hamiltonian(kind, sites, seed);
  } else {
    H = gen_hamiltonian(kind, dim, seed);
  }

  double beta = rng.log_uniform(cfg.beta_range[0], cfg.beta_range[1]);
  const SpectralDecomposition eig = eig_hermitian(H);
  const double spread = eig.values.maxCoeff() - eig.values.minCoeff();
  if (spread > 0.0) {
    const double cap =
        (std::log(1.0 / cfg.rho_min_target) - std::log(static_cast<double>(dim))) / spread;
    beta = std::min(beta, cap);
  }
  return EnsembleDraw{GibbsEnsemble(H, beta), kind, beta};
}

std::vector<Matrix> draw_positives(int count, int dim, double conditioning,
                                   std::uint64_t seed) {
  std::vector<Matrix> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    out.push_back(gen_positive(dim, mix(seed, 1000 + j), conditioning));
  }
  return out;
}

SplitSpec draw_split(const InsertionTuple& z, Rng& rng) {
  const int n = z.n();
  const int m = rng.uniform_int(1, n);
  double head = 0.0, tail = 0.0;
  for (int j = 0; j < m - 1; ++j) head += z.z[j].real();
  for (int j = m; j < n; ++j) tail += z.z[j].real();
  const double re_m = z.z[m - 1].real();
  const double eps = std::min(1e-3, re_m / 4.0);
  const double lo = std::max(eps, re_m - (0.5 - head));
  const double hi = std::min(0.5 - tail, re_m - eps);
  const double re_prime = lo < hi ? rng.uniform(lo, hi) : re_m / 2.0;
  const double im_share = rng.uniform();
  SplitSpec split;
  split.m = m;
  split.z_prime = Complex(re_prime, im_share * z.z[m - 1].imag());
  split.z_dprime = z.z[m - 1] - split.z_prime;
  return split;
}

VerificationRecord dispatch_check(const CampaignConfig& cfg, const std::string& check,
                                  int trial, std::uint64_t seed) {
  Rng rng(seed);

  if (check == "trace_holder") {
    // Standalone weighted trace inequalities; no Gibbs ensemble involved.
    const int dim = cfg.dims[rng.uniform_int(0, static_cast<int>(cfg.dims.size()) - 1)];
    Matrix omega = gen_positive(dim, mix(seed, 1), cfg.conditioning);
    omega /= omega.trace().real();
    const Matrix nu1 = gen_positive(dim, mix(seed, 2), cfg.conditioning);
    const Matrix nu2 = gen_positive(dim, mix(seed, 3), cfg.conditioning);
    const std::vector<Matrix> ops = {gen_positive(dim, mix(seed, 4), cfg.conditioning),
                                     gen_positive(dim, mix(seed, 5), cfg.conditioning),
                                     gen_ginibre(dim, mix(seed, 6))};
    const double p = rng.uniform(1.05, 8.0);
    VerificationRecord rec = finite_trace_holder_check({nu1, nu2}, omega, ops, p);
    rec.meta.seed = seed;
    return rec;
  }

  EnsembleDraw draw = draw_ensemble(cfg, seed, rng);
  const GibbsEnsemble& ens = draw.ens;
  const int dim = ens.dim();
  VerificationRecord rec;

  if (check == "holder") {
    const int n = rng.uniform_int(cfg.n_range[0], cfg.n_range[1]);
    const InsertionTuple z = gen_insertions(n, 1.0, cfg.re_floor, cfg.im_T, seed);
    const std::vector<Matrix> A = draw_positives(n + 1, dim, cfg.conditioning, seed);
    rec = holder_check(ens, A, z);
  } else if (check == "araki") {
    const int n = rng.uniform_int(1, std::min(3, cfg.n_range[1]));
    const InsertionTuple z = gen_insertions(n, 1.0, cfg.re_floor, cfg.im_T, seed);
    std::vector<Matrix> X;
    for (int j = 0; j <= n; ++j) X.push_back(gen_ginibre(dim, mix(seed, 50 + j)));
    std::vector<StateFunctional> phi;
    for (int j = 0; j < n; ++j) {
      Matrix density = gen_positive(dim, mix(seed, 90 + j), cfg.conditioning);
      if (dim >= 2 && trial % 4 == 3) {
        // exercise the support-restricted powers with a rank-deficient state
        const SpectralDecomposition eig = eig_hermitian(density);
        Eigen::VectorXd vals = eig.values;
        vals(0) = 0.0;
        density = eig.basis * vals.asDiagonal() * eig.basis.adjoint();
      }
      phi.emplace_back((density + density.adjoint()) / 2.0);
    }
    rec = araki_bound_check(ens, X, phi, z, draw_split(z, rng));
  } else if (check == "kms") {
    const Matrix A = gen_ginibre(dim, mix(seed, 7));
    const Matrix B = gen_ginibre(dim, mix(seed, 8));
    rec = kms_boundary_check(ens, A, B, rng.uniform(-cfg.im_T, cfg.im_T));
  } else if (check == "tomita") {
    const Matrix G = gen_ginibre(dim, mix(seed, 9));
    const std::vector<Matrix> samples = {
        gen_ginibre(dim, mix(seed, 10)), (G + G.adjoint()) / 2.0,
        gen_positive(dim, mix(seed, 11), cfg.conditioning)};
    rec = tomita_check(ens, samples);
  } else if (check == "lemma41") {
    static const int p_pool[] = {2, 4, 6, 8};
    const int p = p_pool[rng.uniform_int(0, 3)];
    rec = lemma41_check(ens, gen_positive(dim, mix(seed, 12), cfg.conditioning), p);
  } else if (check == "lemma42") {
    static const int p_pool[] = {2, 4, 8};
    const int p = p_pool[rng.uniform_int(0, 2)];
    OptConfig opt = cfg.opt;
    opt.seed = mix(seed, tag_hash("opt"));
    rec = lemma42_check(ens, gen_positive(dim, mix(seed, 13), cfg.conditioning), p, opt);
  } else if (check == "chain") {
    static const std::vector<std::vector<int>> pool = {
        {2}, {4, 4}, {8, 8, 8, 8}, {4, 8, 8}, {6, 6, 6}, {8, 8, 4}};
    const std::vector<int>& p_list = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
    const std::vector<Matrix> A =
        draw_positives(static_cast<int>(p_list.size()), dim, cfg.conditioning, seed);
    rec = chain_identity_check(ens, A, p_list);
  } else if (check == "lp") {
    static const std::vector<std::vector<int>> pool = {{4, 4}, {8, 8}, {4, 8}, {2, 4}};
    const std::vector<int>& p_list = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
    OptConfig opt = cfg.opt;
    opt.seed = mix(seed, tag_hash("opt"));
    const std::vector<Matrix> A = draw_positives(2, dim, cfg.conditioning, seed);
    rec = lp_holder_contraction_check(ens, gen_ginibre(dim, mix(seed, 14)), A, p_list, opt);
  } else {
    throw ConfigError("unknown check: " + check);
  }

  rec.meta.seed = seed;
  if (rec.meta.beta == 0.0) rec.meta.beta = ens.beta();
  if (rec.meta.dim == 0) rec.meta.dim = dim;
  if (!rec.pass) {
    // embed the full instance so a counterexample is never lost
    rec.meta.note += " | instance=" + ensemble_to_json(ens, seed);
  }
  return rec;
}

json record_to_json_obj(const VerificationRecord& rec) {
  json meta{{"dim", rec.meta.dim}, {"beta", rec.meta.beta}, {"n", rec.meta.n},
            {"seed", rec.meta.seed}};
  meta["p"] = rec.meta.p;
  json zs = json::array();
  for (const Complex& w : rec.meta.z) zs.push_back({w.real(), w.imag()});
  meta["z"] = zs;
  if (!rec.meta.note.empty()) meta["note"] = rec.meta.note;
  return json{{"check", rec.meta.check},
              {"lhs", {rec.lhs.real(), rec.lhs.imag()}},
              {"rhs", rec.rhs},
              {"margin", rec.margin},
              {"rel_margin", rec.rel_margin},
              {"pass", rec.pass},
              {"meta", meta}};
}

std::string csv_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

void CampaignConfig::validate() const {
  if (dims.empty()) throw ConfigError("config: dims must be nonempty");
  for (int d : dims) {
    if (d < 2 || d > 16) throw ConfigError("config: dims must lie in [2, 16]");
  }
  if (!(beta_range[0] > 0.0) || beta_range[1] < beta_range[0]) {
    throw ConfigError("config: bad beta range");
  }
  if (n_range[0] < 1 || n_range[1] < n_range[0] || n_range[1] > 4) {
    throw ConfigError("config: n range must satisfy 1 <= lo <= hi <= 4");
  }
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (!(re_floor > 0.0) || re_floor * (n_range[1] + 1) >= 1.0) {
    throw ConfigError("config: re_floor * (max n + 1) must stay below 1");
  }
  if (conditioning < 1.0) throw ConfigError("config: conditioning must be >= 1");
  if (!(rho_min_target >= tol::faithfulness_floor)) {
    throw ConfigError("config: rho_min_target below the faithfulness floor");
  }
  if (checks.empty()) throw ConfigError("config: no checks selected");
  for (const std::string& c : checks) canonical_check_name(c);
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  if (hamiltonian_kind != "mixed") hamiltonian_kind_from_string(hamiltonian_kind);
}

const std::vector<std::string>& check_catalog() {
  static const std::vector<std::string> catalog = {
      "holder", "araki", "kms", "tomita", "lemma41",
      "lemma42", "lp",    "trace_holder", "chain"};
  return catalog;
}

std::string canonical_check_name(const std::string& name) {
  std::string canon = name;
  if (canon == "trace-holder") canon = "trace_holder";
  for (const std::string& c : check_catalog()) {
    if (c == canon) return canon;
  }
  throw ConfigError("unknown check: " + name);
}

VerificationRecord run_check_instance(const CampaignConfig& cfg,
                                      const std::string& check, int trial) {
  const std::uint64_t seed =
      mix(mix(cfg.master_seed, static_cast<std::uint64_t>(trial)), tag_hash(check));
  try {
    return dispatch_check(cfg, check, trial, seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const InfeasibleFloor&) {
    throw;
  } catch (const Error& err) {
    VerificationRecord rec;
    rec.lhs = Complex(0.0, 0.0);
    rec.rhs = 0.0;
    rec.margin = -1.0;
    rec.rel_margin = -1.0;
    rec.pass = false;
    rec.meta.check = check;
    rec.meta.seed = seed;
    rec.meta.note = std::string("error: ") + err.what();
    return rec;
  }
}

Report run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  Report report;
  report.config = cfg;

  std::vector<std::string> checks;
  for (const std::string& c : cfg.checks) checks.push_back(canonical_check_name(c));

  for (const std::string& check : checks) {
    const auto started = std::chrono::steady_clock::now();
    std::vector<VerificationRecord> records(cfg.trials);

    if (cfg.workers <= 1) {
      for (int t = 0; t < cfg.trials; ++t) {
        records[t] = run_check_instance(cfg, check, t);
      }
    } else {
      // Trials are independent; results land in their own slots, so the
      // reduction is by trial index regardless of completion order.
      std::vector<std::future<void>> futures;
      const int stripe = cfg.workers;
      for (int w = 0; w < stripe; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
          for (int t = w; t < cfg.trials; t += stripe) {
            records[t] = run_check_instance(cfg, check, t);
          }
        }));
      }
      for (auto& f : futures) f.get();
    }

    CheckSummary summary;
    summary.count = cfg.trials;
    summary.worst_rel_margin = std::numeric_limits<double>::infinity();
    for (VerificationRecord& rec : records) {
      if (cfg.extra_slack > 0.0 && !rec.pass) {
        rec.pass = rec.margin >= -(tol::ineq + cfg.extra_slack) *
                                     std::max(rec.rhs, tol::margin_floor);
      }
      summary.passes += rec.pass ? 1 : 0;
      summary.worst_rel_margin = std::min(summary.worst_rel_margin, rec.rel_margin);
      report.records.push_back(std::move(rec));
    }
    summary.runtime_sec = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - started)
                              .count();
    report.summary[check] = summary;
  }
  return report;
}

bool Report::all_pass() const {
  for (const VerificationRecord& rec : records) {
    if (!rec.pass) return false;
  }
  return true;
}

std::string report_to_json(const Report& report, bool include_runtime) {
  json root;
  root["schema_version"] = report.schema_version;
  root["config"] = json::parse(config_to_json(report.config));
  json records = json::array();
  for (const VerificationRecord& rec : report.records) {
    records.push_back(record_to_json_obj(rec));
  }
  root["records"] = records;
  json summary;
  for (const auto& [check, s] : report.summary) {
    json item{{"count", s.count},
              {"passes", s.passes},
              {"worst_rel_margin", s.worst_rel_margin}};
    if (include_runtime) item["runtime_sec"] = s.runtime_sec;
    summary[check] = item;
  }
  root["summary"] = summary;
  return root.dump(2);
}

std::string report_to_csv(const Report& report) {
  std::ostringstream os;
  os << "check,pass,lhs_re,lhs_im,rhs,margin,rel_margin,dim,beta,n,seed,p,z,note\n";
  for (const VerificationRecord& rec : report.records) {
    std::ostringstream ps, zs;
    for (size_t i = 0; i < rec.meta.p.size(); ++i) {
      if (i) ps << ";";
      ps << rec.meta.p[i];
    }
    for (size_t i = 0; i < rec.meta.z.size(); ++i) {
      if (i) zs << ";";
      zs << rec.meta.z[i].real() << "+" << rec.meta.z[i].imag() << "i";
    }
    os << rec.meta.check << "," << (rec.pass ? 1 : 0) << "," << rec.lhs.real() << ","
       << rec.lhs.imag() << "," << rec.rhs << "," << rec.margin << ","
       << rec.rel_margin << "," << rec.meta.dim << "," << rec.meta.beta << ","
       << rec.meta.n << "," << rec.meta.seed << "," << ps.str() << "," << zs.str()
       << "," << csv_escape(rec.meta.note) << "\n";
  }
  return os.str();
}

std::string config_to_json(const CampaignConfig& cfg) {
  json j{{"dims", cfg.dims},
         {"beta_range", cfg.beta_range},
         {"n_range", cfg.n_range},
         {"trials", cfg.trials},
         {"master_seed", cfg.master_seed},
         {"re_floor", cfg.re_floor},
         {"im_range", cfg.im_T},
         {"hamiltonian_kind", cfg.hamiltonian_kind},
         {"conditioning", cfg.conditioning},
         {"rho_min_target", cfg.rho_min_target},
         {"checks", cfg.checks},
         {"extra_slack", cfg.extra_slack},
         {"workers", cfg.workers}};
  j["opt"] = json{{"restarts", cfg.opt.restarts},
                  {"max_iters", cfg.opt.max_iters},
                  {"step_init", cfg.opt.step_init},
                  {"grad_tol", cfg.opt.grad_tol},
                  {"seed", cfg.opt.seed}};
  return j.dump(2);
}

CampaignConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  CampaignConfig cfg;
  try {
    if (j.contains("dims")) cfg.dims = j["dims"].get<std::vector<int>>();
    if (j.contains("beta_range")) cfg.beta_range = j["beta_range"].get<std::array<double, 2>>();
    if (j.contains("n_range")) cfg.n_range = j["n_range"].get<std::array<int, 2>>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("re_floor")) cfg.re_floor = j["re_floor"].get<double>();
    if (j.contains("im_range")) cfg.im_T = j["im_range"].get<double>();
    if (j.contains("hamiltonian_kind")) cfg.hamiltonian_kind = j["hamiltonian_kind"].get<std::string>();
    if (j.contains("conditioning")) cfg.conditioning = j["conditioning"].get<double>();
    if (j.contains("rho_min_target")) cfg.rho_min_target = j["rho_min_target"].get<double>();
    if (j.contains("checks")) cfg.checks = j["checks"].get<std::vector<std::string>>();
    if (j.contains("extra_slack")) cfg.extra_slack = j["extra_slack"].get<double>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("opt")) {
      const json& o = j["opt"];
      if (o.contains("restarts")) cfg.opt.restarts = o["restarts"].get<int>();
      if (o.contains("max_iters")) cfg.opt.max_iters = o["max_iters"].get<int>();
      if (o.contains("step_init")) cfg.opt.step_init = o["step_init"].get<double>();
      if (o.contains("grad_tol")) cfg.opt.grad_tol = o["grad_tol"].get<double>();
      if (o.contains("seed")) cfg.opt.seed = o["seed"].get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field failure: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string matrix_to_json(const Matrix& M) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      entries.push_back({M(i, j).real(), M(i, j).imag()});
    }
  }
  return json{{"dim", M.rows()}, {"entries", entries}}.dump();
}

Matrix matrix_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("matrix parse failure: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("entries")) {
    throw ConfigError("matrix file needs {dim, entries}");
  }
  const int dim = j["dim"].get<int>();
  const json& entries = j["entries"];
  if (dim < 1 || static_cast<int>(entries.size()) != dim * dim) {
    throw ConfigError("matrix file: entries must hold dim*dim [re, im] pairs");
  }
  Matrix M(dim, dim);
  int k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j2 = 0; j2 < dim; ++j2, ++k) {
      M(i, j2) = Complex(entries[k][0].get<double>(), entries[k][1].get<double>());
    }
  }
  return M;
}

std::string ensemble_to_json(const GibbsEnsemble& ens, std::uint64_t seed) {
  json entries = json::array();
  const Matrix& H = ens.hamiltonian();
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    for (Eigen::Index j = 0; j < H.cols(); ++j) {
      entries.push_back({H(i, j).real(), H(i, j).imag()});
    }
  }
  return json{{"dim", ens.dim()}, {"beta", ens.beta()}, {"hamiltonian", entries},
              {"seed", seed}}
      .dump();
}

GibbsEnsemble ensemble_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ensemble parse failure: ") + e.what());
  }
  const int dim = j.at("dim").get<int>();
  const double beta = j.at("beta").get<double>();
  const json& entries = j.at("hamiltonian");
  if (static_cast<int>(entries.size()) != dim * dim) {
    throw ConfigError("ensemble file: hamiltonian must hold dim*dim pairs");
  }
  Matrix H(dim, dim);
  int k = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j2 = 0; j2 < dim; ++j2, ++k) {
      H(i, j2) = Complex(entries[k][0].get<double>(), entries[k][1].get<double>());
    }
  }
  return GibbsEnsemble(H, beta);
}

}  // namespace mh
