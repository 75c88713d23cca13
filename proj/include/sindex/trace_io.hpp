#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sindex/solvers.hpp"

namespace sindex {

// 17 significant digits, '.' decimal point, no locale dependence.
std::string fmt_g17(double x);

// Trace CSV: header "iter,error,residual,wall_ms", LF line endings.
void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace);

// Schedule CSV: header "iter,lambda_tau,M_tau".
void write_schedule_csv(const std::filesystem::path& path, const SolverTrace& trace);

// Bound CSV: header "iter,bound", one row per tau starting at 0.
void write_bound_csv(const std::filesystem::path& path,
                     const std::vector<double>& bound);

// Generic numeric CSV with an arbitrary header line.
void write_columns_csv(const std::filesystem::path& path,
                       const std::string& header,
                       const std::vector<std::vector<double>>& columns);

// Parses a numeric CSV produced by the writers above; returns columns.
std::vector<std::vector<double>> read_columns_csv(const std::filesystem::path& path,
                                                  std::string* header = nullptr);

}  // namespace sindex
