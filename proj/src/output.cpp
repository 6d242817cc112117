#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "crossrd/io.hpp"
#include "crossrd/simulation.hpp"

namespace crossrd {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    std::error_code ec;
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory for '" + path + "': " + ec.message());
    }
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed for '" + path + "'");
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at '" + path + "'");
    }
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string vtk_text(const Mesh& mesh, const FieldState& state) {
    if (state.u.size() != mesh.node_count() || state.v.size() != mesh.node_count())
        throw DomainError("vtk_text: state length does not match the mesh");
    std::ostringstream os;
    os << "# vtk DataFile Version 3.0\n";
    os << "crossrd t=" << format_double(state.time) << "\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.node_count() << " double\n";
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
        os << format_double(mesh.nodes(i, 0)) << ' ' << format_double(mesh.nodes(i, 1)) << " 0\n";
    os << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << "\n";
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
        os << "3 " << mesh.triangles(t, 0) << ' ' << mesh.triangles(t, 1) << ' ' << mesh.triangles(t, 2) << "\n";
    os << "CELL_TYPES " << mesh.triangle_count() << "\n";
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) os << "5\n";
    os << "POINT_DATA " << mesh.node_count() << "\n";
    for (const auto& [name, values] : {std::pair{"u", &state.u}, std::pair{"v", &state.v}}) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (Eigen::Index i = 0; i < values->size(); ++i) os << format_double((*values)(i)) << "\n";
    }
    return os.str();
}

void write_vtk(const Mesh& mesh, const FieldState& state, const std::string& path) {
    write_file_atomic(path, vtk_text(mesh, state));
}

std::string norm_csv_text(const NormSeries& norms) {
    std::ostringstream os;
    os << "time,du_norm,dv_norm\n";
    for (std::size_t i = 0; i < norms.size(); ++i)
        os << format_double(norms.time[i]) << ',' << format_double(norms.du[i]) << ',' << format_double(norms.dv[i])
           << "\n";
    return os.str();
}

void write_norm_csv(const NormSeries& norms, const std::string& path) {
    write_file_atomic(path, norm_csv_text(norms));
}

}  // namespace crossrd
