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

#include "cdr/observable.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace cdr {

namespace {

constexpr int kMaxDenseQubits = 12;

Eigen::Matrix2cd pauli_matrix(char letter) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -1i, 1i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad Pauli letter");
  }
  return m;
}

}  // namespace

PauliString PauliString::parse(std::string_view text) {
  PauliString p;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    p.sign_ = text.front() == '-' ? -1 : 1;
    text.remove_prefix(1);
  }
  if (text.empty()) throw std::invalid_argument("empty Pauli string");
  for (char ch : text) {
    switch (ch) {
      case 'I': case 'i': p.x_.push_back(false); p.z_.push_back(false); break;
      case 'X': case 'x': p.x_.push_back(true); p.z_.push_back(false); break;
      case 'Y': case 'y': p.x_.push_back(true); p.z_.push_back(true); break;
      case 'Z': case 'z': p.x_.push_back(false); p.z_.push_back(true); break;
      default:
        throw std::invalid_argument("invalid Pauli character '" + std::string(1, ch) + "'");
    }
  }
  return p;
}

bool PauliString::is_identity() const {
  return std::none_of(x_.begin(), x_.end(), [](bool b) { return b; }) &&
         std::none_of(z_.begin(), z_.end(), [](bool b) { return b; });
}

char PauliString::letter(int q) const {
  if (x_[q] && z_[q]) return 'Y';
  if (x_[q]) return 'X';
  if (z_[q]) return 'Z';
  return 'I';
}

std::string PauliString::str() const {
  std::string s = sign_ < 0 ? "-" : "+";
  for (int q = 0; q < num_qubits(); ++q) s.push_back(letter(q));
  return s;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  const int n = num_qubits();
  for (int q = 0; q < n; ++q) {
    if (x_[q]) m |= std::uint64_t{1} << (n - 1 - q);
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  const int n = num_qubits();
  for (int q = 0; q < n; ++q) {
    if (z_[q]) m |= std::uint64_t{1} << (n - 1 - q);
  }
  return m;
}

int PauliString::y_count() const { return std::popcount(x_mask() & z_mask()); }

Eigen::MatrixXcd PauliString::matrix() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1) * static_cast<double>(sign_);
  for (int q = 0; q < num_qubits(); ++q) {
    const Eigen::Matrix2cd p = pauli_matrix(letter(q));
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        next.block<2, 2>(2 * r, 2 * c) = m(r, c) * p;
      }
    }
    m = std::move(next);
  }
  return m;
}

Observable Observable::pauli(std::string_view text) {
  Observable o;
  o.pauli_ = PauliString::parse(text);
  o.n_ = o.pauli_->num_qubits();
  o.spectral_norm_ = 1.0;
  if (o.pauli_->is_identity()) {
    o.eigenvalues_ = {static_cast<double>(o.pauli_->sign())};
    o.trace_ = o.pauli_->sign() * std::ldexp(1.0, o.n_);
  } else {
    o.eigenvalues_ = {-1.0, 1.0};
    o.trace_ = 0.0;
  }
  return o;
}

Observable Observable::dense(const Eigen::MatrixXcd& matrix) {
  const auto dim = matrix.rows();
  if (dim != matrix.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("observable must be a square 2^n x 2^n matrix");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
  if (n > kMaxDenseQubits) throw std::invalid_argument("observable too large");
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("observable is not Hermitian");
  }
  Observable o;
  o.n_ = n;
  o.dense_ = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(o.dense_);
  o.eigenvectors_ = eig.eigenvectors();
  const Eigen::VectorXd& values = eig.eigenvalues();
  o.eigenvalues_.assign(values.data(), values.data() + values.size());
  o.spectral_norm_ = values.cwiseAbs().maxCoeff();
  o.trace_ = o.dense_.trace().real();
  return o;
}

Observable Observable::default_for(int num_qubits) {
  std::string s(static_cast<std::size_t>(num_qubits), 'I');
  s[0] = 'Z';
  return pauli(s);
}

Eigen::MatrixXcd Observable::matrix() const {
  if (pauli_) return pauli_->matrix();
  return dense_;
}

nlohmann::json to_json(const Observable& o) {
  if (o.is_pauli()) {
    std::string s = o.pauli_string().str();
    if (s.front() == '+') s.erase(s.begin());
    return {{"pauli", s}};
  }
  nlohmann::json entries = nlohmann::json::array();
  const Eigen::MatrixXcd m = o.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      entries.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return {{"dense", entries}};
}

Observable observable_from_json(const nlohmann::json& j) {
  if (j.contains("pauli")) return Observable::pauli(j.at("pauli").get<std::string>());
  if (j.contains("dense")) {
    const auto& entries = j.at("dense");
    const auto count = static_cast<Eigen::Index>(entries.size());
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(count))));
    if (dim * dim != count) throw std::invalid_argument("dense observable must have d*d entries");
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index k = 0; k < count; ++k) {
      const auto& e = entries[static_cast<std::size_t>(k)];
      m(k / dim, k % dim) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return Observable::dense(m);
  }
  throw std::invalid_argument("observable JSON needs a 'pauli' or 'dense' key");
}

}  // namespace cdr
