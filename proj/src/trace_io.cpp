#include "sindex/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sindex/errors.hpp"

namespace sindex {

std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out)
    throw ResourceError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace) {
  std::ofstream out = open_out(path);
  out << "iter,error,residual,wall_ms\n";
  for (const auto& r : trace.records)
    out << r.iter << ',' << fmt_g17(r.error) << ',' << fmt_g17(r.residual) << ','
        << fmt_g17(r.wall_ms) << '\n';
}

void write_schedule_csv(const std::filesystem::path& path, const SolverTrace& trace) {
  std::ofstream out = open_out(path);
  out << "iter,lambda_tau,M_tau\n";
  for (const auto& r : trace.schedule)
    out << r.iter << ',' << fmt_g17(r.lambda_tau) << ',' << fmt_g17(r.m_tau)
        << '\n';
}

void write_bound_csv(const std::filesystem::path& path,
                     const std::vector<double>& bound) {
  std::ofstream out = open_out(path);
  out << "iter,bound\n";
  for (std::size_t i = 0; i < bound.size(); ++i)
    out << i << ',' << fmt_g17(bound[i]) << '\n';
}

void write_columns_csv(const std::filesystem::path& path,
                       const std::string& header,
                       const std::vector<std::vector<double>>& columns) {
  std::ofstream out = open_out(path);
  out << header << '\n';
  if (columns.empty()) return;
  const std::size_t rows = columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows)
      throw std::invalid_argument("write_columns_csv: ragged columns");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ',';
      out << fmt_g17(columns[c][r]);
    }
    out << '\n';
  }
}

std::vector<std::vector<double>> read_columns_csv(const std::filesystem::path& path,
                                                  std::string* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    throw ResourceError("empty CSV '" + path.string() + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (header) *header = line;
  std::vector<std::vector<double>> cols;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (cols.size() <= c) cols.emplace_back();
      cols[c].push_back(std::stod(cell));
      ++c;
    }
  }
  return cols;
}

}  // namespace sindex
