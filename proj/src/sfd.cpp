#include "simjudge/sfd.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace simjudge::sfd {

namespace {

static_assert(sizeof(double) == 8, "binary64 payload requires 8-byte double");

std::string join_csv(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_csv(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ",";
    out << v[i];
  }
  return out.str();
}

template <typename T>
std::vector<T> parse_csv(const std::string& text);

template <>
std::vector<int> parse_csv<int>(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

template <>
std::vector<double> parse_csv<double>(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void write_payload(std::ofstream& out, const Eigen::ArrayXd& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    double v = values[i];
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) {
      bits = __builtin_bswap64(bits);
    }
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
}

}  // namespace

void write_field(const std::string& path, const audit::SolutionField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "SFD1 shape=" << join_csv(field.shape) << " spacing=" << join_csv(field.spacing)
      << " dtype=f64 order=row-major\n";
  write_payload(out, field.values);
  if (!out) throw Error("write to '" + path + "' failed");
}

audit::SolutionField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);

  audit::SolutionField field;
  std::stringstream ss(header);
  std::string token;
  ss >> token;
  if (token != "SFD1") throw Error("'" + path + "' is not an SFD1 file");
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "shape") field.shape = parse_csv<int>(value);
    if (key == "spacing") field.spacing = parse_csv<double>(value);
    if (key == "dtype" && value != "f64") throw Error("SFD1 dtype must be f64");
    if (key == "order" && value != "row-major") throw Error("SFD1 order must be row-major");
  }

  const std::size_t count = field.expected_size();
  field.values = Eigen::ArrayXd(Eigen::Index(count));
  for (std::size_t i = 0; i < count; ++i) {
    char bytes[8];
    in.read(bytes, 8);
    if (!in) throw Error("'" + path + "' payload truncated");
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    if constexpr (std::endian::native == std::endian::big) {
      bits = __builtin_bswap64(bits);
    }
    double v;
    std::memcpy(&v, &bits, 8);
    field.values[Eigen::Index(i)] = v;
  }
  return field;
}

void write_series(const std::string& manifest_path, const std::string& frame_prefix,
                  const audit::SolutionSeries& series) {
  std::ofstream out(manifest_path);
  if (!out) throw Error("cannot open '" + manifest_path + "' for writing");
  const auto dir = std::filesystem::path(manifest_path).parent_path();
  out.precision(17);
  for (std::size_t i = 0; i < series.frames.size(); ++i) {
    const std::string name = frame_prefix + "_" + std::to_string(i) + ".sfd";
    write_field((dir / name).string(), series.frames[i]);
    out << series.times[i] << " " << name << "\n";
  }
}

audit::SolutionSeries read_series(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot open '" + manifest_path + "'");
  const auto dir = std::filesystem::path(manifest_path).parent_path();

  audit::SolutionSeries series;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::stringstream ss(line);
    double t;
    std::string rel;
    if (!(ss >> t >> rel)) continue;
    series.times.push_back(t);
    series.frames.push_back(read_field((dir / rel).string()));
  }
  if (series.frames.empty()) throw Error("series manifest '" + manifest_path + "' is empty");
  return series;
}

}  // namespace simjudge::sfd
