#pragma once

#include <string>
#include <vector>

#include "qtherm/hilbert.hpp"

// Single-qubit operator alphabet and Pauli-string assembly. Basis
// convention: index 0 is the +1 eigenstate of Z. For a Hamiltonian with a
// positive Z coefficient that makes index 0 the higher-energy level, so the
// lowering operator '-' maps index 0 to index 1.

namespace qtherm {

Matrix pauli_i();
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

/// Lowering operator w.r.t. Z: maps the +Z eigenstate to the -Z eigenstate.
Matrix sigma_minus();
/// Raising operator, the adjoint of sigma_minus().
Matrix sigma_plus();

/// Tensor product over a string of {I, X, Y, Z, +, -}, one letter per
/// qubit, first letter most significant. The layout must be all-qubit and
/// length-match the string.
Matrix pauli_string(const std::string& label, const SpaceLayout& layout);

/// Subsystems on which the string acts nontrivially (letters other than I).
std::vector<int> pauli_string_support(const std::string& label);

/// Embed a single-subsystem operator at `site` of a general layout,
/// identity everywhere else.
Matrix embed_at(const Matrix& op, int site, const SpaceLayout& layout);

}  // namespace qtherm
