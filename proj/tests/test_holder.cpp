#include "doctest.h"

#include <cmath>
#include <limits>

#include "mh/holder.hpp"
#include "test_helpers.hpp"

using namespace mh;
using testutil::pauli_x;
using testutil::random_complex;
using testutil::random_hermitian;
using testutil::random_psd;
using testutil::two_level_example;

namespace {

GibbsEnsemble random_ensemble(int d, std::mt19937_64& gen, double beta = 0.7) {
  return make_gibbs(random_hermitian(d, gen), beta);
}

InsertionTuple random_tuple(int n, std::mt19937_64& gen, double budget = 1.0,
                            double floor = 0.05, double im_T = 5.0) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - u01(gen));
    total += x;
  }
  const double target = n * floor + (budget - n * floor) * 0.9 * u01(gen);
  std::vector<Complex> z(n);
  for (int j = 0; j < n; ++j) {
    z[j] = Complex(floor + (target - n * floor) * w[j] / total,
                   im_T * (2.0 * u01(gen) - 1.0));
  }
  return InsertionTuple(std::move(z), budget);
}

}  // namespace

TEST_SUITE("holder") {

TEST_CASE("insertion tuple invariants") {
  CHECK_THROWS_AS(InsertionTuple({Complex(-0.1, 0.0)}), BudgetViolation);
  CHECK_THROWS_AS(InsertionTuple({Complex(0.7, 0.0), Complex(0.5, 0.0)}),
                  BudgetViolation);
  const InsertionTuple ok({Complex(0.5, 3.0), Complex(0.3, -2.0)});
  CHECK(ok.re_sum() == doctest::Approx(0.8));
}

TEST_CASE("split validation") {
  const InsertionTuple z({Complex(0.5, 1.0)});
  SplitSpec good{1, Complex(0.25, 0.4), Complex(0.25, 0.6)};
  CHECK_NOTHROW(validate_split(z, good));

  SplitSpec bad_sum{1, Complex(0.3, 0.0), Complex(0.3, 1.0)};
  CHECK_THROWS_AS(validate_split(z, bad_sum), InvalidSplit);

  SplitSpec nonpositive{1, Complex(0.5, 0.5), Complex(0.0, 0.5)};
  CHECK_THROWS_AS(validate_split(z, nonpositive), InvalidSplit);

  // budget over one flank: 0.45 + 0.4 > 1/2
  const InsertionTuple z2({Complex(0.45, 0.0), Complex(0.5, 0.0)});
  SplitSpec flank{2, Complex(0.1, 0.0), Complex(0.4, 0.0)};
  CHECK_THROWS_AS(validate_split(z2, flank), InvalidSplit);
}

TEST_CASE("exponent_rule worked examples") {
  const auto p_half = exponent_rule(InsertionTuple({Complex(0.5, 0.0), Complex(0.5, 0.0)}));
  CHECK(p_half == std::vector<int>{2, 2, 2});

  const auto p_mixed = exponent_rule(InsertionTuple({Complex(0.3, 0.0), Complex(0.4, 0.0)}));
  CHECK(p_mixed == std::vector<int>{4, 4, 4});

  const auto p_imag = exponent_rule(InsertionTuple({Complex(0.5, 7.0)}));
  CHECK(p_imag == std::vector<int>{2, 2});

  CHECK_THROWS_AS(exponent_rule(InsertionTuple({Complex(0.0, 1.0)})), ZeroRealPart);

  // exact boundary: 1/4 <= 0.25 so p = 4, not 6
  const auto p_exact = exponent_rule(InsertionTuple({Complex(0.25, 0.0)}));
  CHECK(p_exact == std::vector<int>{4, 4});
}

TEST_CASE("multi_correlation") {
  const GibbsEnsemble two = two_level_example();
  std::mt19937_64 gen(41);

  for (int n = 1; n <= 4; ++n) {
    const std::vector<Matrix> ids(n + 1, Matrix::Identity(2, 2));
    const Complex val = multi_correlation(two, ids, random_tuple(n, gen));
    CHECK(std::abs(val - Complex(1.0, 0.0)) < 1e-12);
  }

  // sigma_x pair at z = 1/2: Tr(sx rho^{1/2} sx rho^{1/2}) = 2 sqrt(r1 r2)
  const InsertionTuple half({Complex(0.5, 0.0)});
  const Complex corr = multi_correlation(two, {pauli_x(), pauli_x()}, half);
  CHECK(corr.real() == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-12));
  CHECK(std::abs(corr.imag()) < 1e-13);

  CHECK_THROWS_AS(multi_correlation(two, {Matrix::Identity(2, 2)},
                                    InsertionTuple({Complex(0.5, 0.0)})),
                  DimMismatch);
}

TEST_CASE("holder_check basics and saturation") {
  const GibbsEnsemble two = two_level_example();
  std::mt19937_64 gen(42);

  const InsertionTuple half({Complex(0.5, 0.0)});
  const auto triv = holder_check(two, {Matrix::Identity(2, 2), Matrix::Identity(2, 2)}, half);
  CHECK(triv.pass);
  CHECK(std::abs(triv.lhs - Complex(1.0, 0.0)) < 1e-12);
  CHECK(triv.rhs == doctest::Approx(1.0));
  CHECK(std::abs(triv.margin) < 1e-12);

  // Hermitian non-PSD input: rejected unless diagnostic
  CHECK_THROWS_AS(holder_check(two, {pauli_x(), pauli_x()}, half), NotPSD);
  const auto sx = holder_check(two, {pauli_x(), pauli_x()}, half, true);
  const double frozen = 2.0 * std::sqrt(2.0) / 3.0;
  CHECK(std::abs(sx.lhs) == doctest::Approx(frozen).epsilon(1e-12));
  CHECK(sx.rhs == doctest::Approx(frozen).epsilon(1e-12));  // saturation

  // saturation family on random PSD inputs
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 2 + static_cast<int>(gen() % 5);
    const GibbsEnsemble ens = random_ensemble(d, gen, 0.4 + 0.05 * (rep % 10));
    const Matrix A = random_psd(d, gen);
    const auto rec = holder_check(ens, {A, A}, half);
    CHECK(rec.pass);
    CHECK(std::abs(std::abs(rec.lhs) - rec.rhs) <= 1e-10 * rec.rhs);
  }
}

TEST_CASE("holder_check on random admissible instances") {
  std::mt19937_64 gen(43);
  for (int rep = 0; rep < 300; ++rep) {
    const int d = 2 + static_cast<int>(gen() % 5);
    const GibbsEnsemble ens = random_ensemble(d, gen, 0.2 + 0.02 * (rep % 40));
    const int n = 1 + static_cast<int>(gen() % 4);
    const InsertionTuple z = random_tuple(n, gen);
    std::vector<Matrix> A;
    for (int j = 0; j <= n; ++j) A.push_back(random_psd(d, gen));
    const auto rec = holder_check(ens, A, z);
    CHECK(rec.pass);
    CHECK(rec.rel_margin >= -1e-9);
  }
}

TEST_CASE("holder bound is uniform in the imaginary parts") {
  std::mt19937_64 gen(44);
  const GibbsEnsemble ens = random_ensemble(3, gen, 1.1);
  std::vector<Matrix> A = {random_psd(3, gen), random_psd(3, gen), random_psd(3, gen)};
  const double re1 = 0.22, re2 = 0.31;
  double rhs_ref = -1.0;
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int rep = 0; rep < 10; ++rep) {
    const InsertionTuple z({Complex(re1, u(gen)), Complex(re2, u(gen))});
    const auto rec = holder_check(ens, A, z);
    CHECK(rec.pass);
    if (rhs_ref < 0.0) rhs_ref = rec.rhs;
    CHECK(rec.rhs == doctest::Approx(rhs_ref).epsilon(1e-12));  // bound does not move
  }
}

TEST_CASE("araki_bound_check worked examples") {
  const GibbsEnsemble two = two_level_example();
  const StateFunctional omega_state(two.rho());

  // all identity: both sides equal 1
  const InsertionTuple z({Complex(0.5, 0.0)});
  SplitSpec split{1, Complex(0.25, 0.0), Complex(0.25, 0.0)};
  const auto triv = araki_bound_check(two, {Matrix::Identity(2, 2), Matrix::Identity(2, 2)},
                                      {omega_state}, z, split);
  CHECK(triv.pass);
  CHECK(std::abs(triv.lhs - Complex(1.0, 0.0)) < 1e-12);
  CHECK(triv.rhs == doctest::Approx(1.0));

  // sigma_x pair: lhs = 2 sqrt(2)/3, rhs = 1
  const auto sx = araki_bound_check(two, {pauli_x(), pauli_x()}, {omega_state}, z, split);
  CHECK(sx.pass);
  CHECK(std::abs(sx.lhs) == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-12));
  CHECK(sx.rhs == doctest::Approx(1.0).epsilon(1e-12));

  SplitSpec bad{1, Complex(0.6, 0.0), Complex(-0.1, 0.0)};
  CHECK_THROWS_AS(araki_bound_check(two, {pauli_x(), pauli_x()}, {omega_state}, z, bad),
                  InvalidSplit);
}

TEST_CASE("araki_bound_check random instances") {
  std::mt19937_64 gen(45);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    const int d = 2 + static_cast<int>(gen() % 5);
    const GibbsEnsemble ens = random_ensemble(d, gen, 0.3 + 0.01 * (rep % 80));
    const int n = 1 + static_cast<int>(gen() % 3);
    const InsertionTuple z = random_tuple(n, gen);

    std::vector<Matrix> X;
    for (int j = 0; j <= n; ++j) X.push_back(random_complex(d, gen));
    std::vector<StateFunctional> phi;
    for (int j = 0; j < n; ++j) phi.emplace_back(random_psd(d, gen));

    const int m = 1 + static_cast<int>(gen() % n);
    double head = 0.0, tail = 0.0;
    for (int j = 0; j < m - 1; ++j) head += z.z[j].real();
    for (int j = m; j < n; ++j) tail += z.z[j].real();
    const double re_m = z.z[m - 1].real();
    const double eps = std::min(1e-3, re_m / 4.0);
    const double lo = std::max(eps, re_m - (0.5 - head));
    const double hi = std::min(0.5 - tail, re_m - eps);
    if (lo >= hi) continue;
    SplitSpec split;
    split.m = m;
    split.z_prime = Complex(lo + (hi - lo) * u01(gen), 0.5 * z.z[m - 1].imag());
    split.z_dprime = z.z[m - 1] - split.z_prime;

    const auto rec = araki_bound_check(ens, X, phi, z, split);
    CHECK(rec.pass);
    CHECK(rec.rel_margin >= -1e-9);
  }
}

TEST_CASE("araki bound with rank-deficient functionals approaches the dense limit") {
  std::mt19937_64 gen(46);
  const GibbsEnsemble ens = random_ensemble(3, gen, 0.9);
  const InsertionTuple z({Complex(0.4, 1.3)});
  SplitSpec split{1, Complex(0.2, 0.6), Complex(0.2, 0.7)};
  const std::vector<Matrix> X = {random_complex(3, gen), random_complex(3, gen)};

  Matrix base = random_psd(3, gen);
  const SpectralDecomposition eig = eig_hermitian(base);
  Eigen::VectorXd vals = eig.values;
  vals(0) = 0.0;  // exact rank drop
  const Matrix singular = eig.basis * vals.asDiagonal() * eig.basis.adjoint();

  const auto rec_singular = araki_bound_check(
      ens, X, {StateFunctional((singular + singular.adjoint()) / 2.0)}, z, split);
  CHECK(rec_singular.pass);

  // densify: phi + eps * id converges to the singular record from above
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const double eps : {1e-2, 1e-4, 1e-6}) {
    const Matrix dense = singular + eps * Matrix::Identity(3, 3);
    const auto rec = araki_bound_check(ens, X, {StateFunctional(dense)}, z, split);
    CHECK(rec.pass);
    const double gap = std::abs(std::abs(rec.lhs) - std::abs(rec_singular.lhs)) +
                       std::abs(rec.rhs - rec_singular.rhs);
    CHECK(gap <= prev_gap * (1.0 + 1e-9));
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-4);
}

TEST_CASE("finite_trace_holder_check") {
  const GibbsEnsemble two = two_level_example();
  const Matrix id = Matrix::Identity(2, 2);

  // identities saturate both inequalities at 1
  const auto triv = finite_trace_holder_check({two.rho(), two.rho()}, two.rho(),
                                              {id, id, id}, 2.0);
  CHECK(triv.pass);
  CHECK(std::abs(triv.margin) < 1e-12);

  // the all-ones pair saturates the symmetrized pairing at 1 + 2 sqrt(2)/3,
  // while the unsymmetrized Tr(omega A B) = 2 exceeds it (recorded in note)
  Matrix ones(2, 2);
  ones << 1, 1, 1, 1;
  const auto sat = finite_trace_holder_check({two.rho(), two.rho()}, two.rho(),
                                             {ones, ones, id}, 2.0);
  CHECK(sat.pass);
  const double frozen = 1.0 + 2.0 * std::sqrt(2.0) / 3.0;
  CHECK(std::abs(sat.lhs) == doctest::Approx(frozen).epsilon(1e-12));
  CHECK(sat.rhs == doctest::Approx(frozen).epsilon(1e-12));
  CHECK(sat.meta.note.find("literal_unsym=2") != std::string::npos);

  std::mt19937_64 gen(47);
  std::uniform_real_distribution<double> up(1.05, 8.0);
  for (int rep = 0; rep < 500; ++rep) {
    const int d = 2 + static_cast<int>(gen() % 5);
    Matrix omega = random_psd(d, gen) + 0.01 * Matrix::Identity(d, d);
    omega /= omega.trace().real();
    const auto rec = finite_trace_holder_check(
        {random_psd(d, gen) + 1e-6 * Matrix::Identity(d, d),
         random_psd(d, gen) + 1e-6 * Matrix::Identity(d, d)},
        omega, {random_psd(d, gen), random_psd(d, gen), random_complex(d, gen)},
        up(gen));
    CHECK(rec.pass);
    CHECK(rec.rel_margin >= -1e-9);
  }

  CHECK_THROWS_AS(finite_trace_holder_check({two.rho(), two.rho()}, two.rho(),
                                            {ones, ones, id}, 0.5),
                  BadExponent);
  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(finite_trace_holder_check({singular, two.rho()}, two.rho(),
                                            {id, id, id}, 2.0),
                  SingularState);
}

}  // TEST_SUITE
