#include "crossrd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace crossrd {

double Mesh::signed_area(Eigen::Index t) const {
    const auto p0 = nodes.row(triangles(t, 0));
    const auto p1 = nodes.row(triangles(t, 1));
    const auto p2 = nodes.row(triangles(t, 2));
    return 0.5 * ((p1(0) - p0(0)) * (p2(1) - p0(1)) - (p2(0) - p0(0)) * (p1(1) - p0(1)));
}

namespace {

// Splits the quad p0 -> p1 -> p2 -> p3 (counter-clockwise) into two triangles.
void split_quad(TriangleMatrix& tris, Eigen::Index& k, int p0, int p1, int p2, int p3, bool flip) {
    if (!flip) {
        tris.row(k++) << p0, p1, p2;
        tris.row(k++) << p0, p2, p3;
    } else {
        tris.row(k++) << p0, p1, p3;
        tris.row(k++) << p1, p2, p3;
    }
}

}  // namespace

Mesh annulus_mesh(double a, double b, int n_r, int n_theta) {
    if (!(a > 0) || !(b > a)) throw DomainError("annulus_mesh requires 0 < a < b");
    if (n_r < 1) throw DomainError("annulus_mesh requires n_r >= 1");
    if (n_theta < 3) throw DomainError("annulus_mesh requires n_theta >= 3");

    Mesh mesh;
    const Eigen::Index n_nodes = Eigen::Index(n_r + 1) * n_theta;
    mesh.nodes.resize(n_nodes, 2);
    mesh.boundary.assign(n_nodes, 0);
    for (int i = 0; i <= n_r; ++i) {
        const double r = (i == n_r) ? b : a + (b - a) * i / n_r;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n_theta;
            const Eigen::Index id = Eigen::Index(i) * n_theta + j;
            mesh.nodes.row(id) << r * std::cos(th), r * std::sin(th);
            mesh.boundary[id] = (i == 0 || i == n_r);
        }
    }

    // In the (r, theta) chart the Jacobian is r > 0, so counter-clockwise
    // there stays counter-clockwise in the plane.
    mesh.triangles.resize(2 * Eigen::Index(n_r) * n_theta, 3);
    Eigen::Index k = 0;
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            const int jn = (j + 1) % n_theta;
            const int p00 = i * n_theta + j, p10 = (i + 1) * n_theta + j;
            const int p11 = (i + 1) * n_theta + jn, p01 = i * n_theta + jn;
            split_quad(mesh.triangles, k, p00, p10, p11, p01, (i + j) % 2 == 1);
        }
    }
    return mesh;
}

Mesh disc_mesh(double radius, int n_r, int n_theta) {
    if (!(radius > 0)) throw DomainError("disc_mesh requires a positive radius");
    if (n_r < 1) throw DomainError("disc_mesh requires n_r >= 1");
    if (n_theta < 3) throw DomainError("disc_mesh requires n_theta >= 3");

    Mesh mesh;
    const Eigen::Index n_nodes = 1 + Eigen::Index(n_r) * n_theta;
    mesh.nodes.resize(n_nodes, 2);
    mesh.boundary.assign(n_nodes, 0);
    mesh.nodes.row(0) << 0.0, 0.0;
    for (int i = 1; i <= n_r; ++i) {
        const double r = (i == n_r) ? radius : radius * i / n_r;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n_theta;
            const Eigen::Index id = 1 + Eigen::Index(i - 1) * n_theta + j;
            mesh.nodes.row(id) << r * std::cos(th), r * std::sin(th);
            mesh.boundary[id] = (i == n_r);
        }
    }

    mesh.triangles.resize(n_theta + 2 * Eigen::Index(n_r - 1) * n_theta, 3);
    Eigen::Index k = 0;
    for (int j = 0; j < n_theta; ++j) mesh.triangles.row(k++) << 0, 1 + j, 1 + (j + 1) % n_theta;
    for (int i = 1; i < n_r; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            const int jn = (j + 1) % n_theta;
            const int p00 = 1 + (i - 1) * n_theta + j, p10 = 1 + i * n_theta + j;
            const int p11 = 1 + i * n_theta + jn, p01 = 1 + (i - 1) * n_theta + jn;
            split_quad(mesh.triangles, k, p00, p10, p11, p01, (i + j) % 2 == 1);
        }
    }
    return mesh;
}

Mesh rectangle_mesh(double lx, double ly, int nx, int ny) {
    if (!(lx > 0) || !(ly > 0)) throw DomainError("rectangle_mesh requires positive side lengths");
    if (nx < 1 || ny < 1) throw DomainError("rectangle_mesh requires nx, ny >= 1");

    Mesh mesh;
    const Eigen::Index n_nodes = Eigen::Index(nx + 1) * (ny + 1);
    mesh.nodes.resize(n_nodes, 2);
    mesh.boundary.assign(n_nodes, 0);
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const Eigen::Index id = Eigen::Index(j) * (nx + 1) + i;
            mesh.nodes.row(id) << lx * i / nx, ly * j / ny;
            mesh.boundary[id] = (i == 0 || i == nx || j == 0 || j == ny);
        }
    }
    mesh.triangles.resize(2 * Eigen::Index(nx) * ny, 3);
    Eigen::Index k = 0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int p00 = j * (nx + 1) + i, p10 = p00 + 1;
            const int p01 = p00 + nx + 1, p11 = p01 + 1;
            split_quad(mesh.triangles, k, p00, p10, p11, p01, (i + j) % 2 == 1);
        }
    }
    return mesh;
}

namespace {

std::map<std::pair<int, int>, int> edge_use_counts(const Mesh& mesh) {
    std::map<std::pair<int, int>, int> count;
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
        for (int e = 0; e < 3; ++e) {
            int i = mesh.triangles(t, e), j = mesh.triangles(t, (e + 1) % 3);
            if (i > j) std::swap(i, j);
            ++count[{i, j}];
        }
    }
    return count;
}

}  // namespace

void validate(const Mesh& mesh) {
    if (mesh.node_count() == 0 || mesh.triangle_count() == 0) throw TopologyError("mesh is empty");
    if (Eigen::Index(mesh.boundary.size()) != mesh.node_count())
        throw TopologyError("boundary flags do not match node count");
    if (!mesh.nodes.allFinite()) throw TopologyError("non-finite node coordinate");
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
        for (int c = 0; c < 3; ++c) {
            const int id = mesh.triangles(t, c);
            if (id < 0 || id >= mesh.node_count())
                throw TopologyError("triangle " + std::to_string(t) + " references node " + std::to_string(id) +
                                    " out of range");
        }
        if (!(mesh.signed_area(t) > 0))
            throw TopologyError("triangle " + std::to_string(t) + " has non-positive area " +
                                std::to_string(mesh.signed_area(t)));
    }
    for (const auto& [edge, n] : edge_use_counts(mesh)) {
        if (n > 2)
            throw TopologyError("edge (" + std::to_string(edge.first) + ", " + std::to_string(edge.second) +
                                ") shared by " + std::to_string(n) + " triangles");
    }
}

std::vector<std::pair<int, int>> boundary_edges(const Mesh& mesh) {
    // Keep the orientation of the owning triangle so the edges run counter-clockwise.
    const auto count = edge_use_counts(mesh);
    std::vector<std::pair<int, int>> out;
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
        for (int e = 0; e < 3; ++e) {
            const int i = mesh.triangles(t, e), j = mesh.triangles(t, (e + 1) % 3);
            if (count.at({std::min(i, j), std::max(i, j)}) == 1) out.emplace_back(i, j);
        }
    }
    return out;
}

void mark_boundary_from_topology(Mesh& mesh) {
    mesh.boundary.assign(mesh.node_count(), 0);
    for (const auto& [i, j] : boundary_edges(mesh)) mesh.boundary[i] = mesh.boundary[j] = 1;
}

MeshStats mesh_stats(const Mesh& mesh) {
    MeshStats s;
    s.nodes = mesh.node_count();
    s.elements = mesh.triangle_count();
    s.dof = 2 * s.nodes;
    s.boundary_nodes = std::count(mesh.boundary.begin(), mesh.boundary.end(), 1);
    s.min_area = std::numeric_limits<double>::infinity();
    s.max_area = 0;
    s.min_angle_deg = 180.0;
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
        const double area = mesh.signed_area(t);
        s.min_area = std::min(s.min_area, area);
        s.max_area = std::max(s.max_area, area);
        s.total_area += area;
        for (int c = 0; c < 3; ++c) {
            const Eigen::RowVector2d p = mesh.nodes.row(mesh.triangles(t, c));
            const Eigen::RowVector2d e1 = mesh.nodes.row(mesh.triangles(t, (c + 1) % 3)) - p;
            const Eigen::RowVector2d e2 = mesh.nodes.row(mesh.triangles(t, (c + 2) % 3)) - p;
            const double cross = e1(0) * e2(1) - e1(1) * e2(0);
            const double angle = std::atan2(std::abs(cross), e1.dot(e2)) * 180.0 / std::numbers::pi;
            s.min_angle_deg = std::min(s.min_angle_deg, angle);
        }
    }
    if (s.elements == 0) s.min_area = 0;
    return s;
}

}  // namespace crossrd
