#pragma once

// File output shared by the library and the command-line tool. Every writer
// goes through write_file_atomic: content lands in a sibling temporary file
// that is renamed over the target once complete.

#include <string>

#include "crossrd/mesh.hpp"

namespace crossrd {

struct FieldState;
struct NormSeries;

/// Creates parent directories as needed. Throws std::runtime_error naming the path on failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// Legacy VTK ASCII UNSTRUCTURED_GRID with POINT_DATA scalars "u" and "v".
std::string vtk_text(const Mesh& mesh, const FieldState& state);
void write_vtk(const Mesh& mesh, const FieldState& state, const std::string& path);

/// CSV with header `time,du_norm,dv_norm`.
std::string norm_csv_text(const NormSeries& norms);
void write_norm_csv(const NormSeries& norms, const std::string& path);

}  // namespace crossrd
