#pragma once

// Linear triangle meshes on planar domains.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "crossrd/errors.hpp"

namespace crossrd {

using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
using TriangleMatrix = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Nodes, counter-clockwise triangles and per-node boundary flags.
struct Mesh {
    NodeMatrix nodes;
    TriangleMatrix triangles;
    std::vector<char> boundary;

    Eigen::Index node_count() const { return nodes.rows(); }
    Eigen::Index triangle_count() const { return triangles.rows(); }

    double signed_area(Eigen::Index t) const;
};

/// Structured annulus a <= r <= b with n_r radial layers and n_theta sectors.
/// Each (layer, sector) cell is split along a diagonal whose direction
/// alternates in a checkerboard. Node (i, j) sits at index i * n_theta + j.
Mesh annulus_mesh(double a, double b, int n_r, int n_theta);

/// Disc of the given radius: a centre node fanned to n_r rings of n_theta nodes.
Mesh disc_mesh(double radius, int n_r, int n_theta);

/// [0, lx] x [0, ly] split into nx x ny cells, two triangles per cell.
Mesh rectangle_mesh(double lx, double ly, int nx, int ny);

/// Throws TopologyError on out-of-range indices, non-positive areas, or
/// edges shared by more than two triangles.
void validate(const Mesh& mesh);

/// Undirected edges used by exactly one triangle, as node pairs.
std::vector<std::pair<int, int>> boundary_edges(const Mesh& mesh);

/// Sets `boundary` from the edges that belong to a single triangle.
void mark_boundary_from_topology(Mesh& mesh);

struct MeshStats {
    Eigen::Index nodes = 0;
    Eigen::Index elements = 0;
    Eigen::Index boundary_nodes = 0;
    Eigen::Index dof = 0;  // two species per node
    double min_area = 0;
    double max_area = 0;
    double total_area = 0;
    double min_angle_deg = 0;
};

MeshStats mesh_stats(const Mesh& mesh);

struct MshReadResult {
    Mesh mesh;
    int reoriented = 0;  // triangles whose node order was flipped on input
};

/// Reads an ASCII MSH 2.2 file. Only 2-node lines (type 1), 3-node triangles
/// (type 2) and points (type 15) are accepted; line elements flag boundary
/// nodes. Nodes not referenced by any triangle are dropped and the remainder
/// renumbered densely from 0 in file order.
MshReadResult read_msh(const std::string& path);

/// Writes an ASCII MSH 2.2 file with boundary edges as line elements.
void write_msh(const Mesh& mesh, const std::string& path);

}  // namespace crossrd
