/**
 * File formats: self-describing JSON documents with integer point arrays and
 * canonical "p/q" rationals. Five kinds are understood: triangulation,
 * signs, lift-pair, doubled-line, and bounds-request, plus the exported
 * complex dump.
 */

#ifndef PATCHWORK_IO_HPP
#define PATCHWORK_IO_HPP

#include "bounds.hpp"
#include "doubled.hpp"
#include "mixed.hpp"
#include "patchwork.hpp"

#include <json.hpp>

#include <fstream>

namespace patchwork {
namespace io {

using json = nlohmann::ordered_json;

inline Rat rational_from_json(const json& j)
{
    if (!j.is_string())
        throw ParseError("rationals must be \"p/q\" strings");
    return parse_rational(j.get<std::string>());
}

inline json rational_to_json(const Rat& r)
{
    return format_rational(r);
}

inline IntVec point_from_json(const json& j, int dim)
{
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ParseError("points must be integer arrays of the document dimension");
    IntVec p(dim);
    for (int c = 0; c < dim; ++c)
    {
        if (!j[static_cast<std::size_t>(c)].is_number_integer())
            throw ParseError("point coordinates must be integers");
        p(c) = Int(j[static_cast<std::size_t>(c)].get<long long>());
    }
    return p;
}

inline json point_to_json(const IntVec& p)
{
    json arr = json::array();
    for (Eigen::Index c = 0; c < p.size(); ++c)
        arr.push_back(p(c).convert_to<long long>());
    return arr;
}

struct TriangulationDocument {
    ConvexTriangulation tau;
    std::optional<SignDistribution> signs;
};

inline json triangulation_to_json(const ConvexTriangulation& tau,
                                  const SignDistribution* signs = nullptr)
{
    json doc;
    doc["kind"] = signs ? "signs" : "triangulation";
    doc["dim"] = tau.ambient();
    json pts = json::array();
    for (const IntVec& p : tau.config.points)
        pts.push_back(point_to_json(p));
    doc["points"] = pts;
    json cells = json::array();
    for (const auto& cell : tau.cells)
        cells.push_back(cell);
    doc["cells"] = cells;
    if (tau.lift)
    {
        json lift = json::array();
        for (const Rat& v : *tau.lift)
            lift.push_back(rational_to_json(v));
        doc["lift"] = lift;
    }
    if (signs)
        doc["signs"] = *signs;
    return doc;
}

inline TriangulationDocument triangulation_from_json(const json& doc)
{
    if (!doc.contains("kind") || (doc["kind"] != "triangulation" && doc["kind"] != "signs"))
        throw ParseError("expected a triangulation or signs document");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        throw ParseError("missing dimension");
    int dim = doc["dim"].get<int>();
    if (dim < 1 || dim > 16)
        throw ParseError("dimension out of range");
    if (!doc.contains("points") || !doc["points"].is_array() || doc["points"].empty())
        throw ParseError("missing points");
    std::vector<IntVec> pts;
    for (const auto& j : doc["points"])
        pts.push_back(point_from_json(j, dim));

    TriangulationDocument out;
    out.tau.config = PointConfiguration(dim, pts);
    if (!doc.contains("cells") || !doc["cells"].is_array())
        throw ParseError("missing cells");
    for (const auto& jc : doc["cells"])
    {
        if (!jc.is_array() || jc.empty())
            throw ParseError("cells must be nonempty index arrays");
        std::vector<int> cell;
        for (const auto& ji : jc)
        {
            if (!ji.is_number_integer())
                throw ParseError("cell entries must be point indices");
            int idx = ji.get<int>();
            if (idx < 0 || idx >= out.tau.config.size())
                throw ParseError("cell index out of range");
            cell.push_back(idx);
        }
        std::sort(cell.begin(), cell.end());
        cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
        out.tau.cells.push_back(std::move(cell));
    }
    if (doc.contains("lift"))
    {
        if (!doc["lift"].is_array() ||
            doc["lift"].size() != static_cast<std::size_t>(out.tau.config.size()))
            throw ParseError("lift must carry one rational per point");
        LiftingFunction lift;
        for (const auto& j : doc["lift"])
            lift.push_back(rational_from_json(j));
        out.tau.lift = std::move(lift);
    }
    if (doc["kind"] == "signs")
    {
        if (!doc.contains("signs") || !doc["signs"].is_array() ||
            doc["signs"].size() != static_cast<std::size_t>(out.tau.config.size()))
            throw ParseError("signs must carry one value per point");
        SignDistribution s;
        for (const auto& j : doc["signs"])
        {
            if (!j.is_number_integer() || (j.get<int>() != 1 && j.get<int>() != -1))
                throw ParseError("signs must be +1 or -1");
            s.push_back(j.get<int>());
        }
        out.signs = std::move(s);
    }
    return out;
}

inline json complex_to_json(const PatchworkComplex& complex)
{
    json doc;
    doc["kind"] = "complex";
    doc["dim"] = complex.n;
    doc["degree"] = complex.degree;
    doc["top_dim"] = complex.top_dim;
    json levels = json::array();
    for (int d = 0; d <= complex.top_dim; ++d)
    {
        json level = json::array();
        for (const auto& cell : complex.cells[static_cast<std::size_t>(d)])
        {
            json jc;
            jc["orthant"] = cell.orthant;
            json rows = json::array();
            for (int p = 0; p < cell.npts; ++p)
            {
                json row = json::array();
                for (int c = 0; c < complex.n; ++c)
                    row.push_back(cell.rows[static_cast<std::size_t>(p * complex.n + c)]);
                rows.push_back(row);
            }
            jc["points2"] = rows;
            level.push_back(jc);
        }
        levels.push_back(level);
    }
    doc["cells"] = levels;
    return doc;
}

inline PatchworkComplex complex_from_json(const json& doc)
{
    if (!doc.contains("kind") || doc["kind"] != "complex")
        throw ParseError("expected a complex document");
    for (const char* field : {"dim", "degree", "top_dim"})
        if (!doc.contains(field) || !doc[field].is_number_integer())
            throw ParseError("complex document missing integer fields");
    int n = doc["dim"].get<int>();
    int m = doc["degree"].get<int>();
    int top = doc["top_dim"].get<int>();
    if (n < 1 || n > 16 || m < 1 || top < 0 || top > n)
        throw ParseError("complex document fields out of range");
    if (!doc.contains("cells") || !doc["cells"].is_array() ||
        static_cast<int>(doc["cells"].size()) != top + 1)
        throw ParseError("complex document needs one cell level per dimension");

    detail::ComplexBuilder builder(n, m, top);
    const auto& top_level = doc["cells"][static_cast<std::size_t>(top)];
    for (const auto& jc : top_level)
    {
        if (!jc.contains("orthant") || !jc["orthant"].is_number_integer() ||
            !jc.contains("points2") || !jc["points2"].is_array())
            throw ParseError("malformed complex cell");
        std::uint32_t g = jc["orthant"].get<std::uint32_t>();
        if (n < 31 && (g >> n))
            throw ParseError("orthant mask out of range");
        std::vector<std::int64_t> rows;
        if (static_cast<int>(jc["points2"].size()) != top + 1)
            throw ParseError("top cell must be a simplex");
        for (const auto& jr : jc["points2"])
        {
            if (!jr.is_array() || static_cast<int>(jr.size()) != n)
                throw ParseError("malformed complex cell point");
            for (const auto& jv : jr)
            {
                if (!jv.is_number_integer())
                    throw ParseError("complex coordinates must be integers");
                rows.push_back(jv.get<std::int64_t>());
            }
        }
        builder.add_top(g, rows);
    }
    PatchworkComplex out = builder.finalize();
    out.n = n;
    out.degree = m;
    for (int d = 0; d <= top; ++d)
        if (static_cast<std::size_t>(out.cell_count(d)) !=
            doc["cells"][static_cast<std::size_t>(d)].size())
            throw ParseError("complex document cells are inconsistent with their closure");
    return out;
}

inline AffinePairLift lift_pair_from_json(const json& doc)
{
    if (!doc.contains("kind") || doc["kind"] != "lift-pair")
        throw ParseError("expected a lift-pair document");
    AffinePairLift lift;
    if (!doc.contains("k") || !doc["k"].is_number_integer() || !doc.contains("n") ||
        !doc["n"].is_number_integer())
        throw ParseError("lift-pair needs integer k and n");
    lift.k = doc["k"].get<int>();
    lift.n = doc["n"].get<int>();
    for (const char* field : {"a", "b"})
        if (!doc.contains(field) || !doc[field].is_array())
            throw ParseError("lift-pair needs rational arrays a and b");
    for (const auto& j : doc["a"])
        lift.a.push_back(rational_from_json(j));
    for (const auto& j : doc["b"])
        lift.b.push_back(rational_from_json(j));
    lift.validate();
    return lift;
}

inline json lift_pair_to_json(const AffinePairLift& lift)
{
    json doc;
    doc["kind"] = "lift-pair";
    doc["k"] = lift.k;
    doc["n"] = lift.n;
    json a = json::array(), b = json::array();
    for (const Rat& r : lift.a)
        a.push_back(rational_to_json(r));
    for (const Rat& r : lift.b)
        b.push_back(rational_to_json(r));
    doc["a"] = a;
    doc["b"] = b;
    return doc;
}

struct DoubledLineDocument {
    std::vector<Rat> roots_k;
    std::vector<Rat> roots_2k;
    int lead_sign = -1;
};

inline DoubledLineDocument doubled_line_from_json(const json& doc)
{
    if (!doc.contains("kind") || doc["kind"] != "doubled-line")
        throw ParseError("expected a doubled-line document");
    DoubledLineDocument out;
    for (const char* field : {"roots_k", "roots_2k"})
        if (!doc.contains(field) || !doc[field].is_array())
            throw ParseError("doubled-line needs rational root arrays");
    for (const auto& j : doc["roots_k"])
        out.roots_k.push_back(rational_from_json(j));
    for (const auto& j : doc["roots_2k"])
        out.roots_2k.push_back(rational_from_json(j));
    if (!doc.contains("lead_sign") || !doc["lead_sign"].is_number_integer())
        throw ParseError("doubled-line needs lead_sign");
    out.lead_sign = doc["lead_sign"].get<int>();
    if (out.lead_sign != 1 && out.lead_sign != -1)
        throw ParseError("lead_sign must be +1 or -1");
    return out;
}

struct BoundsRequest {
    int max_n = 7;
    std::optional<Rat> seed_delta02;
    std::optional<std::pair<int, int>> t_gap;
};

inline BoundsRequest bounds_request_from_json(const json& doc)
{
    if (!doc.contains("kind") || doc["kind"] != "bounds-request")
        throw ParseError("expected a bounds-request document");
    BoundsRequest out;
    if (doc.contains("max_n"))
    {
        if (!doc["max_n"].is_number_integer())
            throw ParseError("max_n must be an integer");
        out.max_n = doc["max_n"].get<int>();
    }
    if (doc.contains("seeds"))
    {
        const auto& s = doc["seeds"];
        if (!s.is_object() || !s.contains("delta02"))
            throw ParseError("seeds must provide delta02");
        out.seed_delta02 = rational_from_json(s["delta02"]);
    }
    if (doc.contains("t_gap"))
    {
        const auto& g = doc["t_gap"];
        if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() ||
            !g[1].is_number_integer())
            throw ParseError("t_gap must be a [lo, hi] pair");
        out.t_gap = std::make_pair(g[0].get<int>(), g[1].get<int>());
    }
    return out;
}

inline json load_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    json doc;
    try
    {
        in >> doc;
    }
    catch (const std::exception& e)
    {
        throw ParseError(std::string("invalid document: ") + e.what());
    }
    return doc;
}

inline void save_file(const std::string& path, const json& doc)
{
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace io
}  // namespace patchwork

#endif  // PATCHWORK_IO_HPP
