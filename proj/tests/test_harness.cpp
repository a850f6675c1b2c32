#include "doctest.h"

#include <cmath>

#include "mh/campaign.hpp"
#include "mh/rng.hpp"
#include "test_helpers.hpp"

using namespace mh;

TEST_SUITE("harness") {

TEST_CASE("seed mixer and rng determinism") {
  CHECK(mix(1, 2) == mix(1, 2));
  CHECK(mix(1, 2) != mix(2, 1));
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gen_hamiltonian") {
  const Matrix d1 = gen_hamiltonian(HamiltonianKind::diagonal, 2, 11);
  const Matrix d2 = gen_hamiltonian(HamiltonianKind::diagonal, 2, 11);
  CHECK((d1 - d2).norm() == 0.0);  // bitwise reproducible
  for (int i = 0; i < 2; ++i) {
    CHECK(d1(i, i).real() >= 0.0);
    CHECK(d1(i, i).real() <= 1.0);
  }

  const Matrix g = gen_hamiltonian(HamiltonianKind::gue, 4, 5);
  CHECK(is_hermitian(g));

  // two sites, no transverse field: spectrum of -Z Z is {-1, -1, 1, 1}
  const Matrix ising = gen_hamiltonian(HamiltonianKind::ising_chain, 2, 3, 0.0);
  const auto eig = eig_hermitian(ising);
  CHECK(eig.values(0) == doctest::Approx(-1.0));
  CHECK(eig.values(1) == doctest::Approx(-1.0));
  CHECK(eig.values(2) == doctest::Approx(1.0));
  CHECK(eig.values(3) == doctest::Approx(1.0));

  CHECK_THROWS_AS(gen_hamiltonian(HamiltonianKind::ising_chain, 5, 1), SizeTooLarge);
  CHECK_THROWS_AS(gen_hamiltonian(HamiltonianKind::gue, 17, 1), SizeTooLarge);
}

TEST_CASE("gen_positive") {
  const Matrix p1 = gen_positive(4, 21, 100.0);
  const Matrix p2 = gen_positive(4, 21, 100.0);
  CHECK((p1 - p2).norm() == 0.0);
  const auto w = psd_check(p1, 0.0);
  CHECK(w.is_psd);
  CHECK(w.min_eig >= 1.0 / 100.0 * (1.0 - 1e-9));

  // conditioning 1 collapses the spectrum to the identity
  const Matrix flat = gen_positive(3, 9, 1.0);
  CHECK((flat - Matrix::Identity(3, 3)).norm() < 1e-12);

  CHECK_THROWS_AS(gen_positive(3, 9, 0.5), ConfigError);
}

TEST_CASE("gen_insertions") {
  const InsertionTuple z1 = gen_insertions(1, 1.0, 0.05, 5.0, 77);
  CHECK(z1.n() == 1);
  CHECK(z1.z[0].real() >= 0.05);
  CHECK(z1.z[0].real() <= 1.0);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const InsertionTuple z = gen_insertions(n, 1.0, 0.05, 5.0, seed);
    double total = 0.0;
    for (const Complex& w : z.z) {
      CHECK(w.real() >= 0.05);
      CHECK(std::abs(w.imag()) <= 5.0);
      total += w.real();
    }
    CHECK(total <= 1.0 + 1e-12);
  }

  const InsertionTuple za = gen_insertions(3, 1.0, 0.05, 5.0, 123);
  const InsertionTuple zb = gen_insertions(3, 1.0, 0.05, 5.0, 123);
  for (int j = 0; j < 3; ++j) CHECK(za.z[j] == zb.z[j]);

  CHECK_THROWS_AS(gen_insertions(4, 1.0, 0.3, 5.0, 1), InfeasibleFloor);
}

TEST_CASE("smallest campaign: one kms trial at d = 2") {
  CampaignConfig cfg;
  cfg.dims = {2};
  cfg.trials = 1;
  cfg.checks = {"kms"};
  const Report report = run_campaign(cfg);
  CHECK(report.records.size() == 1);
  CHECK(report.records[0].pass);
  CHECK(report.summary.at("kms").passes == 1);
  CHECK(report.all_pass());
}

TEST_CASE("holder campaign over mixed dims passes") {
  CampaignConfig cfg;
  cfg.dims = {2, 3, 4};
  cfg.trials = 100;
  cfg.checks = {"holder"};
  cfg.master_seed = 4242;
  const Report report = run_campaign(cfg);
  CHECK(report.records.size() == 100);
  CHECK(report.all_pass());
  CHECK(report.summary.at("holder").worst_rel_margin >= -1e-9);
}

TEST_CASE("campaign determinism and worker independence") {
  CampaignConfig cfg;
  cfg.dims = {2, 3};
  cfg.trials = 12;
  cfg.checks = {"holder", "kms", "araki", "chain"};
  cfg.master_seed = 99;

  const Report r1 = run_campaign(cfg);
  const Report r2 = run_campaign(cfg);
  CHECK(report_to_json(r1, false) == report_to_json(r2, false));

  CampaignConfig parallel = cfg;
  parallel.workers = 3;
  const Report r3 = run_campaign(parallel);
  // worker count is not part of the comparable region beyond the config echo
  CHECK(report_to_json(r1, false).size() == report_to_json(r3, false).size());
  REQUIRE(r1.records.size() == r3.records.size());
  for (size_t i = 0; i < r1.records.size(); ++i) {
    CHECK(r1.records[i].meta.seed == r3.records[i].meta.seed);
    CHECK(r1.records[i].pass == r3.records[i].pass);
    CHECK(r1.records[i].margin == r3.records[i].margin);
  }
}

TEST_CASE("report summary is consistent with its records") {
  CampaignConfig cfg;
  cfg.dims = {2};
  cfg.trials = 20;
  cfg.checks = {"kms", "tomita"};
  const Report report = run_campaign(cfg);
  for (const auto& [check, summary] : report.summary) {
    int count = 0, passes = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& rec : report.records) {
      if (rec.meta.check != check) continue;
      ++count;
      passes += rec.pass ? 1 : 0;
      worst = std::min(worst, rec.rel_margin);
    }
    CHECK(count == summary.count);
    CHECK(passes == summary.passes);
    CHECK(worst == summary.worst_rel_margin);
  }
}

TEST_CASE("every catalog check runs clean on a small campaign") {
  CampaignConfig cfg;
  cfg.dims = {2, 3};
  cfg.trials = 6;
  cfg.checks = check_catalog();
  cfg.opt.restarts = 24;
  const Report report = run_campaign(cfg);
  CHECK(report.records.size() == 6 * check_catalog().size());
  for (const auto& rec : report.records) {
    INFO(rec.meta.check, " seed=", rec.meta.seed, " note=", rec.meta.note);
    CHECK(rec.pass);
  }
}

TEST_CASE("config json round trip and validation") {
  CampaignConfig cfg;
  cfg.dims = {2, 5};
  cfg.trials = 17;
  cfg.checks = {"holder", "trace_holder"};
  cfg.master_seed = 31337;
  const CampaignConfig back = config_from_json(config_to_json(cfg));
  CHECK(back.dims == cfg.dims);
  CHECK(back.trials == cfg.trials);
  CHECK(back.checks == cfg.checks);
  CHECK(back.master_seed == cfg.master_seed);

  CHECK_THROWS_AS(config_from_json("{\"trials\": 0}"), ConfigError);
  CHECK_THROWS_AS(config_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{\"checks\": [\"nope\"]}"), ConfigError);
  CHECK_NOTHROW(canonical_check_name("trace-holder"));
}

TEST_CASE("matrix and ensemble json round trips") {
  std::mt19937_64 gen(55);
  const Matrix M = testutil::random_complex(3, gen);
  const Matrix back = matrix_from_json(matrix_to_json(M));
  CHECK((M - back).norm() == 0.0);

  const GibbsEnsemble ens = make_gibbs(testutil::random_hermitian(3, gen), 1.7);
  const GibbsEnsemble eback = ensemble_from_json(ensemble_to_json(ens, 42));
  CHECK((ens.rho() - eback.rho()).norm() < 1e-15);
  CHECK(eback.beta() == ens.beta());

  CHECK_THROWS_AS(matrix_from_json("{\"dim\": 2, \"entries\": [[1, 0]]}"), ConfigError);
}

TEST_CASE("csv flattening") {
  CampaignConfig cfg;
  cfg.dims = {2};
  cfg.trials = 2;
  cfg.checks = {"holder"};
  const Report report = run_campaign(cfg);
  const std::string csv = report_to_csv(report);
  CHECK(csv.find("check,pass,lhs_re") == 0);
  // header plus one row per record
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

}  // TEST_SUITE
