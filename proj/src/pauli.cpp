#include "qtherm/pauli.hpp"

#include <sstream>

namespace qtherm {

namespace {

Matrix two_by_two(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix letter_op(char letter) {
  switch (letter) {
    case 'I':
      return Matrix::Identity(2, 2);
    case 'X':
      return pauli_x();
    case 'Y':
      return pauli_y();
    case 'Z':
      return pauli_z();
    case '+':
      return sigma_plus();
    case '-':
      return sigma_minus();
    default: {
      std::ostringstream os;
      os << "pauli_string: unknown letter '" << letter << "'";
      throw ConfigError(os.str());
    }
  }
}

}  // namespace

Matrix pauli_i() { return Matrix::Identity(2, 2); }

Matrix pauli_x() { return two_by_two(0, 1, 1, 0); }

Matrix pauli_y() {
  return two_by_two(0, Complex(0, -1), Complex(0, 1), 0);
}

Matrix pauli_z() { return two_by_two(1, 0, 0, -1); }

Matrix sigma_minus() { return two_by_two(0, 0, 1, 0); }

Matrix sigma_plus() { return two_by_two(0, 1, 0, 0); }

Matrix pauli_string(const std::string& label, const SpaceLayout& layout) {
  if (static_cast<int>(label.size()) != layout.subsystem_count()) {
    std::ostringstream os;
    os << "pauli_string: label \"" << label << "\" has " << label.size()
       << " letters but the layout has " << layout.subsystem_count()
       << " subsystems";
    throw ConfigError(os.str());
  }
  for (Index d : layout.subsystem_dims) {
    if (d != 2) {
      throw ConfigError("pauli_string: layout has a non-qubit subsystem");
    }
  }
  Matrix out = letter_op(label[0]);
  for (std::size_t i = 1; i < label.size(); ++i) {
    out = tensor_product(out, letter_op(label[i]));
  }
  return out;
}

std::vector<int> pauli_string_support(const std::string& label) {
  std::vector<int> support;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] != 'I') support.push_back(static_cast<int>(i));
  }
  return support;
}

Matrix embed_at(const Matrix& op, int site, const SpaceLayout& layout) {
  if (site < 0 || site >= layout.subsystem_count()) {
    throw DimensionMismatch("embed_at: site out of range");
  }
  if (op.rows() != layout.subsystem_dims[site] ||
      op.cols() != layout.subsystem_dims[site]) {
    throw DimensionMismatch("embed_at: operator does not fit the site");
  }
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < layout.subsystem_count(); ++s) {
    if (s == site) {
      out = tensor_product(out, op);
    } else {
      out = tensor_product(
          out, Matrix::Identity(layout.subsystem_dims[s],
                                layout.subsystem_dims[s]));
    }
  }
  return out;
}

}  // namespace qtherm
