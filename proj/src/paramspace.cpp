#include "crossrd/paramspace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "crossrd/io.hpp"

namespace crossrd {

void GridSpec::validate() const {
    for (const auto& [name, ax] : {std::pair{"alpha", &alpha}, std::pair{"beta", &beta}}) {
        if (!(ax->lo > 0)) throw DomainError(std::string(name) + " range must start above 0");
        if (!(ax->lo < ax->hi)) throw DomainError(std::string(name) + " range needs lo < hi");
        if (ax->count < 2) throw DomainError(std::string(name) + " range needs at least 2 samples");
    }
}

std::string to_string(AggregateClass c) {
    switch (c) {
        case AggregateClass::Stable: return "stable";
        case AggregateClass::Turing: return "turing";
        case AggregateClass::Hopf: return "hopf";
        case AggregateClass::Homogeneous: return "homogeneous";
    }
    return "unknown";
}

PointResult classify_point(double alpha, double beta, const DiffusionTensor<double>& dt, double gamma, double k2) {
    const auto p = KineticParams<double>::unchecked(alpha, beta, gamma);
    const Matrix2<double> a = stability_matrix(p, dt, k2);
    const EigenPair<double> ev = eigenpair(a);
    PointResult r;
    r.label = classify(a);
    r.lambda1 = ev.lambda1;
    r.lambda2 = ev.lambda2;
    r.trace = a.trace();
    r.det = a.determinant();
    r.k2 = k2;
    return r;
}

namespace {

void check_sweep_inputs(const GridSpec& gs, double gamma) {
    gs.validate();
    if (!(gamma >= 0)) throw DomainError("gamma must be non-negative");
}

}  // namespace

ClassifiedGrid sweep(const GridSpec& gs, const DiffusionTensor<double>& dt, double gamma, double k2) {
    check_sweep_inputs(gs, gamma);
    if (!(k2 >= 0)) throw DomainError("k^2 must be non-negative");
    ClassifiedGrid cg;
    cg.grid = gs;
    cg.modes = {k2};
    cg.points.resize(gs.size());
    for (int ib = 0; ib < gs.beta.count; ++ib)
        for (int ia = 0; ia < gs.alpha.count; ++ia)
            cg.points[gs.index(ia, ib)] = classify_point(gs.alpha.value(ia), gs.beta.value(ib), dt, gamma, k2);
    return cg;
}

ClassifiedGrid sweep_aggregated(const GridSpec& gs, const DiffusionTensor<double>& dt, double gamma,
                                const std::vector<double>& modes) {
    check_sweep_inputs(gs, gamma);
    if (modes.empty()) throw DomainError("aggregated sweep needs at least one mode");
    for (double k2 : modes)
        if (!(k2 >= 0)) throw DomainError("k^2 must be non-negative");

    ClassifiedGrid cg;
    cg.grid = gs;
    cg.modes = modes;
    cg.aggregated = true;
    cg.points.resize(gs.size());
    cg.aggregate.resize(gs.size());
    for (int ib = 0; ib < gs.beta.count; ++ib) {
        for (int ia = 0; ia < gs.alpha.count; ++ia) {
            const double alpha = gs.alpha.value(ia), beta = gs.beta.value(ib);
            const std::size_t idx = gs.index(ia, ib);
            const PointResult base = classify_point(alpha, beta, dt, gamma, 0.0);
            cg.points[idx] = base;
            if (base.label == RegionLabel::ComplexUnstable) {
                cg.aggregate[idx] = AggregateClass::Hopf;
                continue;
            }
            if (base.label == RegionLabel::RealUnstable) {
                cg.aggregate[idx] = AggregateClass::Homogeneous;
                continue;
            }
            cg.aggregate[idx] = AggregateClass::Stable;
            for (double k2 : modes) {
                if (k2 == 0) continue;
                const PointResult r = classify_point(alpha, beta, dt, gamma, k2);
                if (r.label != RegionLabel::RealUnstable) continue;
                if (cg.aggregate[idx] != AggregateClass::Turing || r.lambda2.real() > cg.points[idx].lambda2.real()) {
                    cg.aggregate[idx] = AggregateClass::Turing;
                    cg.points[idx] = r;
                }
            }
        }
    }
    return cg;
}

// ---------------------------------------------------------------------------

std::vector<Polyline> zero_level_set(const GridSpec& gs, const std::vector<double>& field) {
    gs.validate();
    const int na = gs.alpha.count, nb = gs.beta.count;
    if (field.size() != gs.size()) throw DomainError("field size does not match the grid");

    auto f = [&](int ia, int ib) { return field[gs.index(ia, ib)]; };
    auto pos = [&](int ia, int ib) { return Eigen::Vector2d(gs.alpha.value(ia), gs.beta.value(ib)); };
    const long n_horizontal = long(na - 1) * nb;
    auto h_edge = [&](int ia, int ib) { return long(ib) * (na - 1) + ia; };
    auto v_edge = [&](int ia, int ib) { return n_horizontal + long(ib) * na + ia; };

    std::map<long, Eigen::Vector2d> point;  // crossing point per edge
    auto crossing = [&](long id, int ia0, int ib0, int ia1, int ib1) {
        const double f0 = f(ia0, ib0), f1 = f(ia1, ib1);
        if ((f0 >= 0) == (f1 >= 0)) return false;
        if (!point.count(id)) {
            const double t = f0 / (f0 - f1);
            point[id] = pos(ia0, ib0) + t * (pos(ia1, ib1) - pos(ia0, ib0));
        }
        return true;
    };

    std::map<long, std::vector<long>> links;
    auto link = [&](long a, long b) {
        links[a].push_back(b);
        links[b].push_back(a);
    };

    for (int ib = 0; ib + 1 < nb; ++ib) {
        for (int ia = 0; ia + 1 < na; ++ia) {
            const long e[4] = {h_edge(ia, ib), v_edge(ia + 1, ib), h_edge(ia, ib + 1), v_edge(ia, ib)};
            const bool c[4] = {crossing(e[0], ia, ib, ia + 1, ib), crossing(e[1], ia + 1, ib, ia + 1, ib + 1),
                               crossing(e[2], ia, ib + 1, ia + 1, ib + 1), crossing(e[3], ia, ib, ia, ib + 1)};
            const int n = c[0] + c[1] + c[2] + c[3];
            if (n == 2) {
                long ends[2];
                int k = 0;
                for (int i = 0; i < 4; ++i)
                    if (c[i]) ends[k++] = e[i];
                link(ends[0], ends[1]);
            } else if (n == 4) {
                const double centre = 0.25 * (f(ia, ib) + f(ia + 1, ib) + f(ia + 1, ib + 1) + f(ia, ib + 1));
                if ((centre >= 0) == (f(ia, ib) >= 0)) {
                    link(e[0], e[1]);  // cut off corner (ia+1, ib)
                    link(e[2], e[3]);  // cut off corner (ia, ib+1)
                } else {
                    link(e[0], e[3]);
                    link(e[1], e[2]);
                }
            }
        }
    }

    std::vector<Polyline> out;
    std::map<long, bool> used;
    auto walk = [&](long start) {
        Polyline line{point.at(start)};
        used[start] = true;
        long prev = -1, cur = start;
        for (;;) {
            long next = -1;
            for (long cand : links[cur])
                if (cand != prev && !used[cand]) {
                    next = cand;
                    break;
                }
            if (next < 0) {
                // Close a loop back onto its start.
                for (long cand : links[cur])
                    if (cand == start && cand != prev && line.size() > 2) line.push_back(point.at(start));
                break;
            }
            line.push_back(point.at(next));
            used[next] = true;
            prev = cur;
            cur = next;
        }
        out.push_back(std::move(line));
    };
    for (const auto& [id, nb_ids] : links)
        if (nb_ids.size() == 1 && !used[id]) walk(id);
    for (const auto& [id, nb_ids] : links)
        if (!used[id]) walk(id);
    return out;
}

std::vector<Polyline> partition_curve(const ClassifiedGrid& cg, LevelField which) {
    std::vector<double> field(cg.points.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const PointResult& p = cg.points[i];
        field[i] = which == LevelField::Discriminant ? p.discriminant() : which == LevelField::Trace ? p.trace : p.det;
    }
    return zero_level_set(cg.grid, field);
}

// ---------------------------------------------------------------------------

std::string region_csv_text(const ClassifiedGrid& cg) {
    std::ostringstream os;
    os << "alpha,beta,label,re_l1,im_l1,re_l2,im_l2,k2\n";
    for (int ib = 0; ib < cg.grid.beta.count; ++ib) {
        for (int ia = 0; ia < cg.grid.alpha.count; ++ia) {
            const PointResult& p = cg.at(ia, ib);
            os << format_double(cg.grid.alpha.value(ia)) << ',' << format_double(cg.grid.beta.value(ib)) << ','
               << to_string(p.label) << ',' << format_double(p.lambda1.real()) << ','
               << format_double(p.lambda1.imag()) << ',' << format_double(p.lambda2.real()) << ','
               << format_double(p.lambda2.imag()) << ',' << format_double(p.k2) << '\n';
        }
    }
    return os.str();
}

void write_region_csv(const ClassifiedGrid& cg, const std::string& path) {
    write_file_atomic(path, region_csv_text(cg));
}

namespace {

RegionLabel parse_label(const std::string& s, const std::string& source, std::size_t line) {
    for (RegionLabel l : {RegionLabel::RealStable, RegionLabel::ComplexStable, RegionLabel::ComplexUnstable,
                          RegionLabel::RealUnstable})
        if (to_string(l) == s) return l;
    throw ParseError(source, line, "unknown label '" + s + "'");
}

}  // namespace

ClassifiedGrid parse_region_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != "alpha,beta,label,re_l1,im_l1,re_l2,im_l2,k2")
        throw ParseError(source, 1, "missing or unexpected header");

    struct Row {
        double alpha, beta;
        PointResult p;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8) throw ParseError(source, line_no, "expected 8 fields");
        double v[8] = {};
        for (int i : {0, 1, 3, 4, 5, 6, 7}) {
            const auto res = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v[i]);
            if (res.ec != std::errc() || res.ptr != cells[i].data() + cells[i].size())
                throw ParseError(source, line_no, "bad number '" + cells[i] + "'");
        }
        Row r{v[0], v[1], {}};
        r.p.label = parse_label(cells[2], source, line_no);
        r.p.lambda1 = {v[3], v[4]};
        r.p.lambda2 = {v[5], v[6]};
        r.p.trace = (r.p.lambda1 + r.p.lambda2).real();
        r.p.det = (r.p.lambda1 * r.p.lambda2).real();
        r.p.k2 = v[7];
        rows.push_back(r);
    }
    if (rows.empty()) throw ParseError(source, line_no, "no data rows");

    // Beta-major order: alpha cycles fastest.
    int na = 1;
    while (na < int(rows.size()) && rows[na].beta == rows[0].beta) ++na;
    if (rows.size() % std::size_t(na) != 0) throw ParseError(source, line_no, "row count is not a full grid");
    const int nb = int(rows.size() / std::size_t(na));

    ClassifiedGrid cg;
    cg.grid.alpha = {rows.front().alpha, rows[na - 1].alpha, na};
    cg.grid.beta = {rows.front().beta, rows.back().beta, nb};
    cg.points.resize(rows.size());
    std::vector<double> k2s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const int ia = int(i % std::size_t(na)), ib = int(i / std::size_t(na));
        if (rows[i].alpha != cg.grid.alpha.value(ia) || rows[i].beta != cg.grid.beta.value(ib))
            throw ParseError(source, i + 2, "point does not lie on an evenly spaced beta-major grid");
        cg.points[i] = rows[i].p;
        if (std::find(k2s.begin(), k2s.end(), rows[i].p.k2) == k2s.end()) k2s.push_back(rows[i].p.k2);
    }
    std::sort(k2s.begin(), k2s.end());
    cg.modes = k2s;
    return cg;
}

ClassifiedGrid read_region_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read region CSV '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_region_csv(ss.str(), path);
}

std::string curves_csv_text(const std::vector<Polyline>& curves) {
    std::ostringstream os;
    os << "curve,alpha,beta\n";
    for (std::size_t c = 0; c < curves.size(); ++c)
        for (const auto& p : curves[c]) os << c << ',' << format_double(p.x()) << ',' << format_double(p.y()) << '\n';
    return os.str();
}

}  // namespace crossrd
