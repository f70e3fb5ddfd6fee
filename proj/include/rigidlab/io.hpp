#ifndef RIGIDLAB_IO_HPP
#define RIGIDLAB_IO_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigidlab/bipartite.hpp"
#include "rigidlab/curves.hpp"
#include "rigidlab/errors.hpp"
#include "rigidlab/framework.hpp"
#include "rigidlab/scalar.hpp"

namespace rigidlab::io {

using json = nlohmann::json;

/// Integers and strings ("p/q", "1.25") are exact; JSON floats are floating.
inline Scalar scalar_from_json(const json& j) {
    if (j.is_number_integer()) return Scalar::exact(mpq_class(mpz_class(j.dump(), 10)));
    if (j.is_number_float()) return Scalar::real(j.get<double>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ParseError("expected a number or rational string, got " + j.dump());
}

inline double real_from_json(const json& j) { return scalar_from_json(j).value(); }

inline json scalar_to_json(const Scalar& s) {
    if (!s.is_exact()) return s.value();
    const mpq_class& q = s.rational();
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return q.get_str();
}

inline std::vector<Point> points_from_json(const json& j, std::size_t dim, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of points");
    std::vector<Point> out;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != dim)
            throw ParseError(std::string(what) + " entries must be arrays of " + std::to_string(dim) + " coordinates");
        Point pt;
        for (const auto& x : p) pt.push_back(scalar_from_json(x));
        out.push_back(std::move(pt));
    }
    return out;
}

inline json points_to_json(const std::vector<Point>& pts) {
    json arr = json::array();
    for (const auto& p : pts) {
        json row = json::array();
        for (const auto& x : p) row.push_back(scalar_to_json(x));
        arr.push_back(std::move(row));
    }
    return arr;
}

inline std::size_t dimension_from_json(const json& j) {
    if (!j.contains("dimension") || !j["dimension"].is_number_unsigned() || j["dimension"].get<std::size_t>() < 1)
        throw ParseError("\"dimension\" must be a positive integer");
    return j["dimension"].get<std::size_t>();
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

/// {"dimension": d, "points": [[...]], "edges": [[i, j], ...]}
inline Framework framework_from_json(const json& j) {
    const std::size_t d = dimension_from_json(j);
    if (!j.contains("points") || !j.contains("edges")) throw ParseError("framework needs \"points\" and \"edges\"");
    Realization r{d, points_from_json(j["points"], d, "points")};
    Graph g{r.points.size(), {}};
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
            throw ParseError("edges must be pairs of vertex indices");
        g.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
    }
    try {
        return Framework(std::move(g), std::move(r));
    } catch (const Error& e) {
        throw ParseError(std::string("invalid framework: ") + e.what());
    }
}

inline json framework_to_json(const Framework& f) {
    json edges = json::array();
    for (const auto& e : f.graph().edges) edges.push_back({e.i, e.j});
    return {{"dimension", f.dim()}, {"points", points_to_json(f.realization().points)}, {"edges", edges}};
}

/// {"dimension": d, "A": [[...]], "B": [[...]]}
inline BipartiteRealization bipartite_from_json(const json& j) {
    const std::size_t d = dimension_from_json(j);
    if (!j.contains("A") || !j.contains("B")) throw ParseError("bipartite file needs \"A\" and \"B\"");
    BipartiteRealization br{d, points_from_json(j["A"], d, "A"), points_from_json(j["B"], d, "B")};
    try {
        br.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("invalid bipartite realization: ") + e.what());
    }
    return br;
}

inline json bipartite_to_json(const BipartiteRealization& br) {
    return {{"dimension", br.dim}, {"A", points_to_json(br.A)}, {"B", points_to_json(br.B)}};
}

inline std::vector<double> reals_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(real_from_json(x));
    return out;
}

/// {"kind":"helix","dimension":d,"blocks":[[rho,lambda,theta],...],"w":[...],"offset":[...],"domain":[lo,hi]}
/// or {"kind":"polynomial","coeffs":[[c0,c1,...] per coordinate],"domain":[lo,hi]}.
inline CurveHandle curve_from_json(const json& j) {
    if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError("curve needs a \"kind\"");
    if (!j.contains("domain") || !j["domain"].is_array() || j["domain"].size() != 2)
        throw ParseError("curve needs \"domain\": [t_lo, t_hi]");
    const double lo = real_from_json(j["domain"][0]), hi = real_from_json(j["domain"][1]);
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "helix") {
            HelixSpec h;
            h.dim = dimension_from_json(j);
            for (const auto& b : j.value("blocks", json::array())) {
                if (!b.is_array() || b.size() != 3) throw ParseError("helix blocks are [rho, lambda, theta]");
                h.blocks.push_back({real_from_json(b[0]), real_from_json(b[1]), real_from_json(b[2])});
            }
            h.w = reals_from_json(j.value("w", json::array()), "w");
            h.offset = reals_from_json(j.value("offset", json::array()), "offset");
            return CurveHandle::helix(std::move(h), lo, hi);
        }
        if (kind == "polynomial") {
            if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw ParseError("polynomial curve needs \"coeffs\"");
            PolynomialCurve poly;
            for (const auto& c : j["coeffs"]) poly.coeffs.push_back(reals_from_json(c, "coeffs"));
            if (j.contains("dimension") && dimension_from_json(j) != poly.coeffs.size())
                throw ParseError("\"dimension\" disagrees with the number of coordinate polynomials");
            return CurveHandle::polynomial(std::move(poly), lo, hi);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string("invalid curve: ") + e.what());
    }
    throw ParseError("unknown curve kind '" + kind + "'");
}

inline json curve_to_json(const CurveHandle& c) {
    json j;
    if (c.kind() == CurveKind::helix) {
        const auto& h = *c.helix_spec();
        json blocks = json::array();
        for (const auto& b : h.blocks) blocks.push_back({b.rho, b.lambda, b.theta});
        j = {{"kind", "helix"}, {"dimension", h.dim}, {"blocks", blocks}, {"w", h.w}, {"offset", h.offset}};
    } else if (c.kind() == CurveKind::polynomial) {
        j = {{"kind", "polynomial"}, {"dimension", c.dim()}, {"coeffs", c.polynomial_curve()->coeffs}};
    } else {
        throw InvalidInputError("tabulated curves have no file format");
    }
    j["domain"] = {c.t_lo(), c.t_hi()};
    return j;
}

namespace detail {

inline void write_string(std::ostream& os, const std::string& s) { os << json(s).dump(); }

inline void write_json(std::ostream& os, const json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad;
                write_string(os, it.key());
                os << ": ";
                write_json(os, it.value(), indent, depth + 1);
            }
            os << "\n" << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[";
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ", ";
                first = false;
                write_json(os, v, indent, depth + 1);
            }
            os << "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                os << "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf;
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace detail

/// Deterministic serialization: sorted keys, floats with 17 significant digits.
inline std::string dump(const json& j) {
    std::ostringstream os;
    detail::write_json(os, j, 2, 0);
    os << "\n";
    return os.str();
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInputError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw InvalidInputError("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace rigidlab::io

#endif  // RIGIDLAB_IO_HPP
