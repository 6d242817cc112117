// MSH 2.2 ASCII grammar accepted here:
//
//   $MeshFormat
//   2.2 0 <data-size>
//   $EndMeshFormat
//   $Nodes
//   <count>
//   <id> <x> <y> <z>            (count lines)
//   $EndNodes
//   $Elements
//   <count>
//   <id> <type> <ntags> <tag>... <node>...   (count lines)
//   $EndElements
//
// Other $Section ... $EndSection blocks ($PhysicalNames, $Periodic, ...) are
// skipped. Blank lines are ignored everywhere.

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "crossrd/io.hpp"
#include "crossrd/mesh.hpp"

namespace crossrd {

namespace {

class LineReader {
public:
    explicit LineReader(const std::string& path) : path_(path), in_(path) {
        if (!in_) throw std::runtime_error("cannot open mesh file '" + path + "'");
    }

    // Next non-blank line with surrounding whitespace removed.
    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            const auto last = line.find_last_not_of(" \t");
            line = line.substr(first, last - first + 1);
            return true;
        }
        return false;
    }

    std::string expect(const char* what) {
        std::string line;
        if (!next(line)) fail(std::string("unexpected end of file, expected ") + what);
        return line;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_, line_no_, what); }

    std::size_t line_no() const { return line_no_; }

private:
    std::string path_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
};

long parse_count(LineReader& r, const std::string& line) {
    std::istringstream ss(line);
    long n = -1;
    std::string rest;
    if (!(ss >> n) || n < 0 || (ss >> rest)) r.fail("expected a non-negative count, got '" + line + "'");
    return n;
}

struct RawTriangle {
    long nodes[3];
    std::size_t line;
};

}  // namespace

MshReadResult read_msh(const std::string& path) {
    LineReader r(path);
    std::string line;
    bool have_format = false, have_nodes = false, have_elements = false;

    std::vector<long> node_ids;
    std::vector<Eigen::RowVector2d> coords;
    std::unordered_map<long, int> node_index;
    std::vector<RawTriangle> raw_tris;
    std::vector<long> line_nodes;

    while (r.next(line)) {
        if (line.empty() || line[0] != '$') r.fail("expected a section header, got '" + line + "'");
        const std::string section = line.substr(1);

        if (section == "MeshFormat") {
            std::istringstream ss(r.expect("version line"));
            std::string version;
            int file_type = -1, data_size = 0;
            if (!(ss >> version >> file_type >> data_size)) r.fail("malformed $MeshFormat line");
            if (version.rfind("2.", 0) != 0)
                r.fail("unsupported MSH version " + version + " (only ASCII 2.2 is supported)");
            if (file_type != 0) r.fail("binary MSH files are not supported");
            if (r.expect("$EndMeshFormat") != "$EndMeshFormat") r.fail("expected $EndMeshFormat");
            have_format = true;
        } else if (section == "Nodes") {
            if (!have_format) r.fail("$Nodes before $MeshFormat");
            const long n = parse_count(r, r.expect("node count"));
            for (long k = 0; k < n; ++k) {
                std::istringstream ss(r.expect("node line"));
                long id;
                double x, y, z;
                if (!(ss >> id >> x >> y >> z)) r.fail("malformed node line");
                if (!node_index.emplace(id, int(coords.size())).second)
                    r.fail("duplicate node id " + std::to_string(id));
                node_ids.push_back(id);
                coords.emplace_back(x, y);
            }
            if (r.expect("$EndNodes") != "$EndNodes") r.fail("expected $EndNodes");
            have_nodes = true;
        } else if (section == "Elements") {
            if (!have_nodes) r.fail("$Elements before $Nodes");
            const long n = parse_count(r, r.expect("element count"));
            for (long k = 0; k < n; ++k) {
                std::istringstream ss(r.expect("element line"));
                long id;
                int type, ntags;
                if (!(ss >> id >> type >> ntags) || ntags < 0) r.fail("malformed element line");
                for (int t = 0; t < ntags; ++t) {
                    long tag;
                    if (!(ss >> tag)) r.fail("missing element tag");
                }
                int n_nodes = 0;
                switch (type) {
                    case 1: n_nodes = 2; break;
                    case 2: n_nodes = 3; break;
                    case 15: n_nodes = 1; break;
                    default: r.fail("unsupported element type " + std::to_string(type));
                }
                long ids[3];
                for (int c = 0; c < n_nodes; ++c) {
                    if (!(ss >> ids[c])) r.fail("missing element node");
                    if (!node_index.count(ids[c])) r.fail("element references unknown node " + std::to_string(ids[c]));
                }
                std::string extra;
                if (ss >> extra) r.fail("trailing data on element line");
                if (type == 2) raw_tris.push_back({{ids[0], ids[1], ids[2]}, r.line_no()});
                if (type == 1) line_nodes.insert(line_nodes.end(), ids, ids + 2);
            }
            if (r.expect("$EndElements") != "$EndElements") r.fail("expected $EndElements");
            have_elements = true;
        } else {
            const std::string end = "$End" + section;
            for (;;) {
                if (!r.next(line)) r.fail("unterminated section $" + section);
                if (line == end) break;
            }
        }
    }
    if (!have_format) r.fail("missing $MeshFormat");
    if (!have_elements) r.fail("missing $Elements");
    if (raw_tris.empty()) r.fail("mesh contains no triangles");

    // Keep referenced nodes only, in file order.
    std::vector<int> remap(coords.size(), -1);
    for (const auto& t : raw_tris)
        for (long id : t.nodes) remap[node_index.at(id)] = 0;
    int next = 0;
    for (auto& m : remap)
        if (m == 0) m = next++;

    MshReadResult out;
    Mesh& mesh = out.mesh;
    mesh.nodes.resize(next, 2);
    for (std::size_t k = 0; k < coords.size(); ++k)
        if (remap[k] >= 0) mesh.nodes.row(remap[k]) = coords[k];
    mesh.triangles.resize(Eigen::Index(raw_tris.size()), 3);
    for (std::size_t t = 0; t < raw_tris.size(); ++t) {
        for (int c = 0; c < 3; ++c) mesh.triangles(Eigen::Index(t), c) = remap[node_index.at(raw_tris[t].nodes[c])];
        const double area = mesh.signed_area(Eigen::Index(t));
        const double scale = (mesh.nodes.row(mesh.triangles(t, 1)) - mesh.nodes.row(mesh.triangles(t, 0))).squaredNorm() +
                             (mesh.nodes.row(mesh.triangles(t, 2)) - mesh.nodes.row(mesh.triangles(t, 0))).squaredNorm();
        if (!(std::abs(area) > 1e-14 * scale))
            throw TopologyError(path + ":" + std::to_string(raw_tris[t].line) + ": degenerate triangle");
        if (area < 0) {
            std::swap(mesh.triangles(Eigen::Index(t), 1), mesh.triangles(Eigen::Index(t), 2));
            ++out.reoriented;
        }
    }

    if (line_nodes.empty()) {
        mark_boundary_from_topology(mesh);
    } else {
        mesh.boundary.assign(mesh.node_count(), 0);
        for (long id : line_nodes) {
            const int k = remap[node_index.at(id)];
            if (k >= 0) mesh.boundary[k] = 1;
        }
    }
    validate(mesh);
    return out;
}

void write_msh(const Mesh& mesh, const std::string& path) {
    const auto edges = boundary_edges(mesh);
    std::ostringstream os;
    os << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    os << "$Nodes\n" << mesh.node_count() << "\n";
    for (Eigen::Index i = 0; i < mesh.node_count(); ++i)
        os << i + 1 << ' ' << format_double(mesh.nodes(i, 0)) << ' ' << format_double(mesh.nodes(i, 1)) << " 0\n";
    os << "$EndNodes\n";
    os << "$Elements\n" << edges.size() + std::size_t(mesh.triangle_count()) << "\n";
    long id = 1;
    for (const auto& [i, j] : edges) os << id++ << " 1 2 1 1 " << i + 1 << ' ' << j + 1 << "\n";
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
        os << id++ << " 2 2 2 2 " << mesh.triangles(t, 0) + 1 << ' ' << mesh.triangles(t, 1) + 1 << ' '
           << mesh.triangles(t, 2) + 1 << "\n";
    os << "$EndElements\n";
    write_file_atomic(path, os.str());
}

}  // namespace crossrd
