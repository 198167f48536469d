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

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace cdr {

using cplx = std::complex<double>;

/// Signed tensor product of single-qubit Paulis. Character i of the string acts
/// on qubit i, which is the most significant bit of a basis index.
class PauliString {
 public:
  /// Parses e.g. "ZII", "+XYZ", "-ZZ".
  static PauliString parse(std::string_view text);

  int num_qubits() const { return static_cast<int>(x_.size()); }
  bool x(int q) const { return x_[q]; }
  bool z(int q) const { return z_[q]; }
  /// +1 or -1.
  int sign() const { return sign_; }
  bool is_identity() const;
  char letter(int q) const;
  std::string str() const;

  /// Bit masks over basis indices (qubit q <-> bit n-1-q).
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int y_count() const;

  Eigen::MatrixXcd matrix() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<bool> x_;
  std::vector<bool> z_;
  int sign_ = 1;
};

/// Hermitian observable, either a signed Pauli string or a dense matrix.
/// The spectral norm and the eigen-decomposition used for sampling are
/// computed once at construction.
class Observable {
 public:
  static Observable pauli(std::string_view text);
  static Observable dense(const Eigen::MatrixXcd& matrix);
  /// Z on qubit 0, identity elsewhere.
  static Observable default_for(int num_qubits);

  int num_qubits() const { return n_; }
  bool is_pauli() const { return pauli_.has_value(); }
  const PauliString& pauli_string() const { return *pauli_; }

  double spectral_norm() const { return spectral_norm_; }
  double trace() const { return trace_; }
  /// Eigenvalues in ascending order. Dense observables list them with
  /// multiplicity (matching eigenvectors() columns); Pauli strings give {-1, 1}
  /// (or the single sign for the identity).
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  /// Columns are orthonormal eigenvectors (dense observables only).
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }
  /// Dense matrix; built on demand for Pauli strings.
  Eigen::MatrixXcd matrix() const;

 private:
  Observable() = default;

  int n_ = 0;
  std::optional<PauliString> pauli_;
  Eigen::MatrixXcd dense_;
  Eigen::MatrixXcd eigenvectors_;
  std::vector<double> eigenvalues_;
  double spectral_norm_ = 0.0;
  double trace_ = 0.0;
};

nlohmann::json to_json(const Observable& o);
Observable observable_from_json(const nlohmann::json& j);

}  // namespace cdr
