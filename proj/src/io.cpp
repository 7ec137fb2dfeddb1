#include "equitile/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace equitile::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError("not a number: '" + token + "'");
  return value;
}

Index parse_index(const std::string& token) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("not an integer: '" + token + "'");
  }
  return static_cast<Index>(value);
}

enum class Symmetry { general, symmetric, skew, hermitian };

// Reads whitespace separated tokens, skipping '%' comment lines.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string tok;
    while (!(line_ >> tok)) {
      std::string line;
      if (!std::getline(in_, line)) throw ParseError("unexpected end of Matrix Market data");
      if (!line.empty() && line[0] == '%') continue;
      line_.clear();
      line_.str(line);
    }
    return tok;
  }

 private:
  std::istream& in_;
  std::istringstream line_;
};

void format_double(std::ostream& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out << buf;
}

}  // namespace

MatrixFile read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty Matrix Market input");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix") {
    throw ParseError("missing '%%MatrixMarket matrix' banner");
  }
  MatrixFile file;
  format = lower(format);
  if (format == "array") {
    file.format = MatrixFormat::array;
  } else if (format == "coordinate") {
    file.format = MatrixFormat::coordinate;
  } else {
    throw ParseError("unsupported Matrix Market format '" + format + "'");
  }
  field = lower(field);
  if (field == "real" || field == "double") {
    file.field = MatrixField::real;
  } else if (field == "complex") {
    file.field = MatrixField::complex;
  } else if (field == "integer") {
    file.field = MatrixField::integer;
  } else {
    throw ParseError("unsupported Matrix Market field '" + field + "'");
  }
  symmetry = lower(symmetry.empty() ? std::string("general") : symmetry);
  Symmetry sym = Symmetry::general;
  if (symmetry == "symmetric") {
    sym = Symmetry::symmetric;
  } else if (symmetry == "skew-symmetric") {
    sym = Symmetry::skew;
  } else if (symmetry == "hermitian") {
    sym = Symmetry::hermitian;
  } else if (symmetry != "general") {
    throw ParseError("unsupported Matrix Market symmetry '" + symmetry + "'");
  }
  if (sym == Symmetry::hermitian && file.field != MatrixField::complex) {
    throw ParseError("hermitian symmetry requires the complex field");
  }

  TokenReader tokens(in);
  const Index rows = parse_index(tokens.next());
  const Index cols = parse_index(tokens.next());
  if (rows < 0 || cols < 0) throw ParseError("negative matrix dimensions");
  if (sym != Symmetry::general && rows != cols) throw ParseError("symmetric storage needs a square matrix");

  auto read_value = [&]() {
    const double re = parse_double(tokens.next());
    const double im = file.field == MatrixField::complex ? parse_double(tokens.next()) : 0.0;
    return Complex(re, im);
  };
  Matrix m = Matrix::Zero(rows, cols);
  auto store = [&](Index i, Index j, Complex value) {
    m(i, j) = value;
    if (i == j) return;
    switch (sym) {
      case Symmetry::general: break;
      case Symmetry::symmetric: m(j, i) = value; break;
      case Symmetry::skew: m(j, i) = -value; break;
      case Symmetry::hermitian: m(j, i) = std::conj(value); break;
    }
  };

  if (file.format == MatrixFormat::array) {
    for (Index j = 0; j < cols; ++j) {
      const Index first = sym == Symmetry::general ? 0 : (sym == Symmetry::skew ? j + 1 : j);
      for (Index i = first; i < rows; ++i) store(i, j, read_value());
    }
  } else {
    const Index nnz = parse_index(tokens.next());
    if (nnz < 0) throw ParseError("negative entry count");
    for (Index e = 0; e < nnz; ++e) {
      const Index i = parse_index(tokens.next()) - 1;
      const Index j = parse_index(tokens.next()) - 1;
      if (i < 0 || i >= rows || j < 0 || j >= cols) {
        throw ParseError("coordinate entry (" + std::to_string(i + 1) + ", " +
                         std::to_string(j + 1) + ") outside the matrix");
      }
      store(i, j, read_value());
    }
  }
  file.payload = std::move(m);
  return file;
}

MatrixFile read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_matrix_market(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  const bool real = m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0;
  out << "%%MatrixMarket matrix array " << (real ? "real" : "complex") << " general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      format_double(out, m(i, j).real());
      if (!real) {
        out << ' ';
        format_double(out, m(i, j).imag());
      }
      out << '\n';
    }
  }
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  write_matrix_market(out, m);
}

Partition partition_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("cells")) {
    throw ParseError("partition JSON needs the keys \"n\" and \"cells\"");
  }
  if (!j["n"].is_number_integer()) throw ParseError("partition \"n\" must be an integer");
  const Index n = j["n"].get<Index>();
  if (!j["cells"].is_array()) throw ParseError("partition \"cells\" must be an array");
  std::vector<std::vector<Index>> cells;
  for (const auto& cell : j["cells"]) {
    if (!cell.is_array()) throw ParseError("each partition cell must be an array");
    std::vector<Index> c;
    for (const auto& v : cell) {
      if (!v.is_number_integer()) throw ParseError("partition indices must be integers");
      c.push_back(v.get<Index>() - 1);
    }
    cells.push_back(std::move(c));
  }
  try {
    return Partition(n, std::move(cells));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid partition: ") + e.what());
  }
}

nlohmann::json partition_to_json(const Partition& p) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : p.cells()) {
    nlohmann::json c = nlohmann::json::array();
    for (Index v : cell) c.push_back(v + 1);
    cells.push_back(std::move(c));
  }
  return {{"n", p.size()}, {"cells", std::move(cells)}};
}

Vector complex_vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("expected a JSON array of numbers or [re, im] pairs");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_number()) {
      v(static_cast<Index>(i)) = Complex(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      v(static_cast<Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
    } else {
      throw ParseError("entry " + std::to_string(i) + " is neither a number nor a [re, im] pair");
    }
  }
  return v;
}

nlohmann::json complex_vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

nlohmann::json complex_list_to_json(const std::vector<Complex>& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const Complex& z : values) out.push_back({z.real(), z.imag()});
  return out;
}

nlohmann::json real_matrix_to_json(const RealMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Phase> phases_from_json(const nlohmann::json& j) {
  const Vector v = complex_vector_from_json(j);
  std::vector<Phase> out;
  for (Index i = 0; i < v.size(); ++i) out.emplace_back(v(i));
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

}  // namespace equitile::io
