#include "tripave/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tripave {

nlohmann::ordered_json MatrixToJson(const Matrix& m) {
  nlohmann::ordered_json j;
  const bool is_complex = !m.IsReal();
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["complex"] = is_complex;
  auto data = nlohmann::ordered_json::array();
  for (const Scalar& z : m.data()) {
    if (is_complex) {
      data.push_back({z.real(), z.imag()});
    } else {
      data.push_back(z.real());
    }
  }
  j["data"] = std::move(data);
  return j;
}

Matrix MatrixFromJson(const nlohmann::ordered_json& j) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const bool is_complex = j.value("complex", false);
    const auto& data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols) {
      throw Error("matrix data length does not match rows*cols");
    }
    std::vector<Scalar> entries;
    entries.reserve(data.size());
    for (const auto& x : data) {
      if (is_complex) {
        if (!x.is_array() || x.size() != 2) throw Error("complex entries are [re, im] pairs");
        entries.emplace_back(x[0].get<double>(), x[1].get<double>());
      } else {
        entries.emplace_back(x.get<double>(), 0.0);
      }
    }
    return Matrix(rows, cols, std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed matrix JSON: ") + e.what());
  }
}

nlohmann::ordered_json FamilyToJson(const VectorFamily& f) {
  nlohmann::ordered_json j = MatrixToJson(f.AsRows());
  j["unit_norm"] = f.unit_norm();
  return j;
}

VectorFamily FamilyFromJson(const nlohmann::ordered_json& j) {
  return VectorFamily::FromRows(MatrixFromJson(j), j.value("unit_norm", false));
}

nlohmann::ordered_json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string Dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string Fnv1aHex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tripave
