#include "opalg/rng.hpp"

#include <cmath>

#include <Eigen/QR>

namespace opalg {

namespace {

// splitmix64 step; standard mixer used to derive substream seeds.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed;
  std::uint64_t mixed = 0;
  for (std::uint64_t i = 0; i <= stream; ++i) mixed = splitmix64(x);
  engine_.seed(mixed);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t n) {
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return static_cast<std::int64_t>(v % un);
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Cplx Rng::gaussian_cplx() {
  const double re = gaussian();
  const double im = gaussian();
  return Cplx(re, im);
}

CMatrix Rng::ginibre(std::int64_t rows, std::int64_t cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      m(i, j) = gaussian_cplx();
    }
  }
  return CMatrix::from_eigen(m);
}

CMatrix Rng::haar_unitary(std::int64_t n) {
  const Eigen::MatrixXcd g = ginibre(n, n).eigen();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r =
      qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge: divide each column of Q by the phase of R's diagonal so
  // the distribution is exactly Haar.
  for (std::int64_t j = 0; j < n; ++j) {
    const Cplx d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= std::conj(d) / mag;
  }
  return CMatrix::from_eigen(q);
}

CMatrix Rng::unit_vector(std::int64_t n) {
  Eigen::VectorXcd v(n);
  for (std::int64_t i = 0; i < n; ++i) v(i) = gaussian_cplx();
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return CMatrix::from_eigen(v);
}

CMatrix Rng::density_matrix(std::int64_t n) {
  const Eigen::MatrixXcd g = ginibre(n, n).eigen();
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return CMatrix::from_eigen(rho);
}

}  // namespace opalg
