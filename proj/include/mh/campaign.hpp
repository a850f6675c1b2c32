#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mh/generators.hpp"
#include "mh/nclp.hpp"
#include "mh/record.hpp"

namespace mh {

// Randomized verification campaign over the check catalog. Every trial is a
// pure function of (master_seed, trial index, check tag); neither worker
// count nor execution order can change a record.
struct CampaignConfig {
  std::vector<int> dims{2, 3, 4};
  std::array<double, 2> beta_range{0.1, 10.0};
  std::array<int, 2> n_range{1, 4};
  int trials = 100;
  std::uint64_t master_seed = 1;
  double re_floor = 0.05;
  double im_T = 5.0;
  std::string hamiltonian_kind = "mixed";  // gue | diagonal | ising_chain | mixed
  double conditioning = 1e3;               // spectrum spread of sampled positives
  // Drawn betas are clipped so the smallest rho eigenvalue stays above this;
  // keeps every sampled ensemble faithful and the spectral calculus well
  // conditioned for the chained evaluations.
  double rho_min_target = 1e-8;
  std::vector<std::string> checks{"holder"};
  OptConfig opt{};           // sup/inf estimator knobs for lemma42 / lp
  double extra_slack = 0.0;  // additional relative margin slack, default none
  int workers = 1;

  void validate() const;  // throws ConfigError
};

struct CheckSummary {
  int count = 0;
  int passes = 0;
  double worst_rel_margin = 0.0;
  double runtime_sec = 0.0;
};

struct Report {
  std::string schema_version = "1";
  CampaignConfig config;
  std::vector<VerificationRecord> records;
  std::map<std::string, CheckSummary> summary;

  bool all_pass() const;
};

// The full check catalog in canonical order.
const std::vector<std::string>& check_catalog();
std::string canonical_check_name(const std::string& name);

// One instance of one check, fully determined by (config, check, trial).
VerificationRecord run_check_instance(const CampaignConfig& cfg,
                                      const std::string& check, int trial);

Report run_campaign(const CampaignConfig& cfg);

// Serialization. Reports exclude wall-clock data from the comparable region
// when include_runtime is false.
std::string report_to_json(const Report& report, bool include_runtime = true);
std::string report_to_csv(const Report& report);
std::string config_to_json(const CampaignConfig& cfg);
CampaignConfig config_from_json(const std::string& text);

// Matrix file format {"dim": d, "entries": [[re, im], ...]} row-major.
std::string matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const std::string& text);

// Ensemble serialization for reports: {dim, beta, hamiltonian, seed?}.
std::string ensemble_to_json(const GibbsEnsemble& ens, std::uint64_t seed);
GibbsEnsemble ensemble_from_json(const std::string& text);

}  // namespace mh
