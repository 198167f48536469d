// Copyright 2026 The CDR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cdr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cdr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase_of(cplx z) {
  double w = std::arg(z) / kTwoPi;
  if (w < 0.0) w += 1.0;
  if (w >= 1.0 - 1e-12) w = 0.0;
  return w;
}

}  // namespace

double unitarity_residual(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

UnitarySpectrum::UnitarySpectrum(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols() || u.rows() == 0) throw std::invalid_argument("unitary must be square");
  if (unitarity_residual(u) > kUnitarityTolerance) throw std::invalid_argument("matrix is not unitary");
  const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
  vectors_ = schur.matrixU();
  const Eigen::MatrixXcd& t = schur.matrixT();
  phases_.resize(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index i = 0; i < u.rows(); ++i) phases_[static_cast<std::size_t>(i)] = phase_of(t(i, i));
}

UnitarySpectrum::UnitarySpectrum(Eigen::MatrixXcd eigenvectors, std::vector<double> phases)
    : vectors_(std::move(eigenvectors)), phases_(std::move(phases)) {
  if (static_cast<std::size_t>(vectors_.cols()) != phases_.size()) {
    throw std::invalid_argument("one phase per eigenvector required");
  }
}

std::vector<double> UnitarySpectrum::overlaps() const {
  std::vector<double> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = std::norm(vectors_(0, static_cast<Eigen::Index>(i)));
  return out;
}

std::vector<double> UnitarySpectrum::frequencies() const {
  std::vector<double> f;
  f.reserve(dim() * dim());
  for (double a : phases_) {
    for (double b : phases_) f.push_back(a - b);
  }
  std::sort(f.begin(), f.end());
  std::vector<double> out;
  for (double x : f) {
    if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
  }
  return out;
}

Eigen::MatrixXcd UnitarySpectrum::power(double t) const {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < dim(); ++i) {
    d(static_cast<Eigen::Index>(i)) = std::polar(1.0, kTwoPi * phases_[i] * t);
  }
  return vectors_ * d.asDiagonal() * vectors_.adjoint();
}

Eigen::VectorXcd UnitarySpectrum::apply_power(double t, const Eigen::VectorXcd& psi) const {
  Eigen::VectorXcd c = vectors_.adjoint() * psi;
  for (std::size_t i = 0; i < dim(); ++i) {
    c(static_cast<Eigen::Index>(i)) *= std::polar(1.0, kTwoPi * phases_[i] * t);
  }
  return vectors_ * c;
}

double g_of_t(const UnitarySpectrum& spec, const Observable& obs, double t) {
  if (static_cast<std::size_t>(1) << obs.num_qubits() != spec.dim()) {
    throw std::invalid_argument("observable size does not match the unitary");
  }
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(spec.dim()));
  zero(0) = 1.0;
  const Eigen::VectorXcd psi = spec.apply_power(t, zero);
  return psi.dot(obs.matrix() * psi).real();
}

double g_of_t(const Eigen::MatrixXcd& u, const Observable& obs, double t) {
  return g_of_t(UnitarySpectrum(u), obs, t);
}

bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

UnitarySpectrum periodic_approximant(const UnitarySpectrum& spec, unsigned p) {
  if (!is_prime(p)) throw std::invalid_argument("period must be a prime");
  std::vector<double> snapped(spec.dim());
  const double pd = static_cast<double>(p);
  for (std::size_t i = 0; i < spec.dim(); ++i) snapped[i] = std::floor(pd * spec.phases()[i]) / pd;
  return UnitarySpectrum(spec.eigenvectors(), std::move(snapped));
}

Eigen::MatrixXcd periodic_approximant(const Eigen::MatrixXcd& u, unsigned p) {
  return periodic_approximant(UnitarySpectrum(u), p).power(1.0);
}

double pure_trace_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  // sqrt(1 - |<a|b>|^2) is the norm of b's component orthogonal to a; this
  // form avoids the cancellation of the textbook formula near b ~ a.
  return 2.0 * (b - a.dot(b) * a).norm();
}

Eigen::MatrixXcd random_unitary(std::size_t dim, const RngStream& rng) {
  auto eng = rng.engine();
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = cplx(normal(eng), normal(eng));
  }
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : cplx(1.0);
  }
  return q;
}

Eigen::VectorXcd random_state(std::size_t dim, const RngStream& rng) {
  auto eng = rng.engine();
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(normal(eng), normal(eng));
  return v.normalized();
}

double FourierModel::operator()(double t) const {
  double s = cos_coeffs.empty() ? 0.0 : cos_coeffs[0];
  for (std::size_t q = 1; q < cos_coeffs.size(); ++q) {
    const double x = kTwoPi * static_cast<double>(q) * t / period;
    s += cos_coeffs[q] * std::cos(x) + sin_coeffs[q] * std::sin(x);
  }
  return s;
}

FourierModel fit_fourier(const std::vector<double>& t, const std::vector<double>& y, double period,
                         std::size_t order) {
  if (t.size() != y.size() || t.empty()) throw std::invalid_argument("need matching, non-empty samples");
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  const auto rows = static_cast<Eigen::Index>(t.size());
  const auto cols = static_cast<Eigen::Index>(2 * order + 1);
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double tk = t[static_cast<std::size_t>(k)];
    a(k, 0) = 1.0;
    for (std::size_t q = 1; q <= order; ++q) {
      const double x = kTwoPi * static_cast<double>(q) * tk / period;
      a(k, static_cast<Eigen::Index>(2 * q - 1)) = std::cos(x);
      a(k, static_cast<Eigen::Index>(2 * q)) = std::sin(x);
    }
    b(k) = y[static_cast<std::size_t>(k)];
  }
  Eigen::MatrixXd gram = a.transpose() * a;
  gram.diagonal().array() += 1e-12;
  const Eigen::VectorXd x = gram.ldlt().solve(a.transpose() * b);
  FourierModel m;
  m.period = period;
  m.cos_coeffs.assign(order + 1, 0.0);
  m.sin_coeffs.assign(order + 1, 0.0);
  m.cos_coeffs[0] = x(0);
  for (std::size_t q = 1; q <= order; ++q) {
    m.cos_coeffs[q] = x(static_cast<Eigen::Index>(2 * q - 1));
    m.sin_coeffs[q] = x(static_cast<Eigen::Index>(2 * q));
  }
  return m;
}

}  // namespace cdr
