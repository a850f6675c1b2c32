#include "mh/generators.hpp"

#include <cmath>

#include "mh/rng.hpp"
#include "mh/spectral.hpp"

namespace mh {

namespace {

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return out;
}

Matrix site_operator(const Matrix& local, int site, int sites) {
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < sites; ++s) {
    out = kron(out, s == site ? local : Matrix::Identity(2, 2));
  }
  return out;
}

}  // namespace

HamiltonianKind hamiltonian_kind_from_string(const std::string& name) {
  if (name == "gue") return HamiltonianKind::gue;
  if (name == "diagonal") return HamiltonianKind::diagonal;
  if (name == "ising_chain" || name == "ising") return HamiltonianKind::ising_chain;
  throw ConfigError("unknown hamiltonian kind: " + name);
}

std::string to_string(HamiltonianKind kind) {
  switch (kind) {
    case HamiltonianKind::gue: return "gue";
    case HamiltonianKind::diagonal: return "diagonal";
    case HamiltonianKind::ising_chain: return "ising_chain";
  }
  return "unknown";
}

Matrix gen_hamiltonian(HamiltonianKind kind, int size_param, std::uint64_t seed,
                       double g) {
  Rng rng(mix(seed, tag_hash("hamiltonian")));
  switch (kind) {
    case HamiltonianKind::gue: {
      if (size_param < 1 || size_param > 16) {
        throw SizeTooLarge("gen_hamiltonian: gue dimension must be in [1, 16]");
      }
      Matrix G(size_param, size_param);
      for (int i = 0; i < size_param; ++i)
        for (int j = 0; j < size_param; ++j) G(i, j) = rng.cgauss();
      return (G + G.adjoint()) / 2.0;
    }
    case HamiltonianKind::diagonal: {
      if (size_param < 1 || size_param > 16) {
        throw SizeTooLarge("gen_hamiltonian: diagonal dimension must be in [1, 16]");
      }
      Matrix H = Matrix::Zero(size_param, size_param);
      for (int i = 0; i < size_param; ++i) H(i, i) = rng.uniform();
      return H;
    }
    case HamiltonianKind::ising_chain: {
      const int sites = size_param;
      if (sites < 1 || (1 << sites) > 16) {
        throw SizeTooLarge("gen_hamiltonian: ising chain limited to 2^k <= 16");
      }
      Matrix sz(2, 2), sx(2, 2);
      sz << 1, 0, 0, -1;
      sx << 0, 1, 1, 0;
      const int dim = 1 << sites;
      Matrix H = Matrix::Zero(dim, dim);
      for (int s = 0; s + 1 < sites; ++s) {
        H -= site_operator(sz, s, sites) * site_operator(sz, s + 1, sites);
      }
      for (int s = 0; s < sites; ++s) {
        H -= g * site_operator(sx, s, sites);
      }
      return H;
    }
  }
  throw ConfigError("gen_hamiltonian: unreachable kind");
}

Matrix gen_positive(int dim, std::uint64_t seed, double conditioning) {
  if (conditioning < 1.0) {
    throw ConfigError("gen_positive: conditioning must be >= 1");
  }
  Rng rng(mix(seed, tag_hash("positive")));
  Matrix G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = rng.cgauss();
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Complex r = R(i, i);
    const Complex phase = std::abs(r) > 0.0 ? r / std::abs(r) : Complex(1.0, 0.0);
    Q.col(i) *= phase;  // fix the phase gauge so Q is Haar and reproducible
  }
  Eigen::VectorXd spectrum(dim);
  for (int i = 0; i < dim; ++i) {
    spectrum(i) = std::exp(rng.uniform(-std::log(conditioning), 0.0));
  }
  const Matrix P = Q * spectrum.asDiagonal() * Q.adjoint();
  return (P + P.adjoint()) / 2.0;
}

InsertionTuple gen_insertions(int n, double alpha, double re_floor, double im_T,
                              std::uint64_t seed) {
  if (n < 1) throw ConfigError("gen_insertions: n must be >= 1");
  if (!(re_floor > 0.0) || n * re_floor >= alpha) {
    throw InfeasibleFloor("gen_insertions: n * re_floor must stay below alpha");
  }
  Rng rng(mix(seed, tag_hash("insertions")));

  // Flat Dirichlet weights from exponential spacings.
  std::vector<double> weights(n);
  double total_w = 0.0;
  for (int j = 0; j < n; ++j) {
    weights[j] = rng.exponential();
    total_w += weights[j];
  }
  const double u = rng.uniform(n * re_floor / alpha, 1.0);
  const double target = alpha * u;  // in [n * re_floor, alpha]
  const double excess = target - n * re_floor;

  std::vector<Complex> z(n);
  for (int j = 0; j < n; ++j) {
    const double re = re_floor + excess * weights[j] / total_w;
    const double im = rng.uniform(-im_T, im_T);
    z[j] = Complex(re, im);
  }
  return InsertionTuple(std::move(z), alpha);
}

Matrix gen_ginibre(int dim, std::uint64_t seed) {
  Rng rng(mix(seed, tag_hash("ginibre")));
  Matrix G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = rng.cgauss();
  return G;
}

}  // namespace mh
