#include "minkit/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "minkit/error.hpp"

namespace minkit {

namespace {

using nlohmann::json;

ComplexMatrix read_part(const json& rows, int n, const char* key) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw FormatError(std::string("state file: \"") + key + "\" must be an array of " + std::to_string(n) + " rows");
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw FormatError(std::string("state file: row ") + std::to_string(i) + " of \"" + key + "\" must have " +
                        std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) {
      if (!row[j].is_number()) throw FormatError(std::string("state file: non-numeric entry in \"") + key + "\"");
      m(i, j) = row[j].get<double>();
    }
  }
  return m;
}

}  // namespace

StateFile parse_state_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("state file: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("state file: top level must be an object");
  if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].size() != 2 ||
      !doc["dims"][0].is_number_integer() || !doc["dims"][1].is_number_integer())
    throw FormatError("state file: \"dims\" must be [dA, dB] with integer entries");
  StateFile out;
  out.dims = Dims{doc["dims"][0].get<int>(), doc["dims"][1].get<int>()};
  if (out.dims.a < 1 || out.dims.b < 1) throw FormatError("state file: dims must be positive");
  if (!doc.contains("re")) throw FormatError("state file: missing \"re\"");
  const int n = out.dims.total();
  const ComplexMatrix re = read_part(doc["re"], n, "re");
  ComplexMatrix im = ComplexMatrix::Zero(n, n);
  if (doc.contains("im")) im = read_part(doc["im"], n, "im");
  out.matrix = re.real().cast<Complex>() + Complex(0.0, 1.0) * im.real().cast<Complex>();
  return out;
}

DensityMatrix read_state(std::string_view text) {
  StateFile f = parse_state_json(text);
  return DensityMatrix::validate(f.matrix, f.dims);
}

DensityMatrix read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open state file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_state(buf.str());
}

std::string write_state_json(const ComplexMatrix& m, Dims dims) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  json doc;
  doc["dims"] = {dims.a, dims.b};
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc.dump() + "\n";
}

std::string write_state_json(const DensityMatrix& rho) { return write_state_json(rho.matrix(), rho.dims()); }

}  // namespace minkit
