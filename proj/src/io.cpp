#include "pmiprof/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pmiprof {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

PairedSample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw SpecError("empty data file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  int m = 0, n = 0;
  for (const auto& h : header) {
    if (h.rfind('x', 0) == 0 && n == 0)
      ++m;
    else if (h.rfind('y', 0) == 0)
      ++n;
    else
      throw SpecError("data header must be x1..xm,y1..yn, got column '" + h + "'");
  }
  if (m == 0 || n == 0) throw SpecError("data header needs at least one x and one y column");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (int(cells.size()) != m + n)
      throw SpecError("row with wrong column count in " + path);
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      try {
        row[i] = std::stod(cells[i]);
      } catch (const std::exception&) {
        throw SpecError("non-numeric cell in " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  PairedSample s;
  s.xs.resize(Eigen::Index(rows.size()), m);
  s.ys.resize(Eigen::Index(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < m; ++c) s.xs(Eigen::Index(r), c) = rows[r][std::size_t(c)];
    for (int c = 0; c < n; ++c) s.ys(Eigen::Index(r), c) = rows[r][std::size_t(m + c)];
  }
  return s;
}

void write_sample_csv(const std::string& path, const PairedSample& sample) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write: " + path);
  for (Eigen::Index c = 0; c < sample.xs.cols(); ++c) out << (c ? "," : "") << "x" << c + 1;
  for (Eigen::Index c = 0; c < sample.ys.cols(); ++c) out << ",y" << c + 1;
  out << "\n";
  for (Eigen::Index r = 0; r < sample.size(); ++r) {
    for (Eigen::Index c = 0; c < sample.xs.cols(); ++c)
      out << (c ? "," : "") << format_double(sample.xs(r, c));
    for (Eigen::Index c = 0; c < sample.ys.cols(); ++c) out << "," << format_double(sample.ys(r, c));
    out << "\n";
  }
}

void write_vector_csv(const std::string& path, const std::string& column, const Vector& values) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write: " + path);
  out << column << "\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) out << format_double(values[i]) << "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write: " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read for digest: " + path);
  std::uint64_t h = 0xCBF29CE484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= std::uint64_t(static_cast<unsigned char>(buf[i]));
      h *= 0x100000001B3ull;
    }
  }
  return h;
}

void write_manifest(const std::string& command_line, Seed seed,
                    const std::vector<std::string>& output_files) {
  if (output_files.empty()) return;
  nlohmann::json j;
  j["command"] = command_line;
  j["seed"] = seed;
  j["version"] = "0.1.0";
  nlohmann::json digests = nlohmann::json::object();
  for (const auto& f : output_files) {
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(f)));
    digests[f] = std::string("fnv1a64:") + hex;
  }
  j["outputs"] = digests;
  const std::string path = output_files.front() + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace pmiprof
