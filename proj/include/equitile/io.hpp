#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "equitile/partition.hpp"
#include "equitile/reflector.hpp"
#include "equitile/types.hpp"

namespace equitile::io {

/// Raised for unreadable or malformed input files.
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class MatrixFormat { array, coordinate };
enum class MatrixField { real, complex, integer };

struct MatrixFile {
  MatrixFormat format = MatrixFormat::array;
  MatrixField field = MatrixField::real;
  Matrix payload;
};

/// Matrix Market reader. Accepts array and coordinate formats with real,
/// integer or complex fields and general, symmetric, skew-symmetric or
/// hermitian symmetry.
MatrixFile read_matrix_market(std::istream& in);
MatrixFile read_matrix_market(const std::filesystem::path& path);

/// Writes the array format with 17 significant digits. The field is real when
/// every imaginary part is zero, complex otherwise.
void write_matrix_market(std::ostream& out, const Matrix& m);
void write_matrix_market(const std::filesystem::path& path, const Matrix& m);

/// {"n": N, "cells": [[1-based indices], ...]}
Partition partition_from_json(const nlohmann::json& j);
nlohmann::json partition_to_json(const Partition& p);

/// JSON array of reals or [re, im] pairs.
Vector complex_vector_from_json(const nlohmann::json& j);
nlohmann::json complex_vector_to_json(const Vector& v);
nlohmann::json complex_list_to_json(const std::vector<Complex>& values);
nlohmann::json real_matrix_to_json(const RealMatrix& m);

std::vector<Phase> phases_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a byte string, lowercase hex.
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace equitile::io
