/**
 * Command-line front end. Subcommands: certify, patchwork, ambient, mixed,
 * doubled-line, bounds, harnack. Exit codes: 0 success, 1 domain-level
 * negative result, 2 malformed input. All numeric output is exact; decimal
 * approximations appear only as annotations.
 */

#include "patchwork/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace patchwork;

std::vector<Rat> parse_rational_list(const std::string& csv)
{
    std::vector<Rat> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (!item.empty())
            out.push_back(parse_rational(item));
    }
    return out;
}

std::string betti_line(const std::vector<long>& b)
{
    std::string line = "b = (";
    for (std::size_t i = 0; i < b.size(); ++i)
        line += (i ? ", " : "") + std::to_string(b[i]);
    return line + ")";
}

int cmd_certify(const std::string& path)
{
    auto doc = io::triangulation_from_json(io::load_file(path));
    if (!doc.tau.lift)
    {
        std::cout << "NOT CONVEX: no lifting function present" << std::endl;
        return 1;
    }
    CertifyReport rep = certify_convexity(doc.tau);
    switch (rep.status)
    {
        case CertifyReport::Status::certified:
            std::cout << "certified" << std::endl;
            return 0;
        case CertifyReport::Status::degenerate_cell:
            std::cout << "DEGENERATE CELL: cell " << rep.cell << std::endl;
            return 1;
        case CertifyReport::Status::not_convex:
            std::cout << "NOT CONVEX: cell " << rep.cell;
            if (rep.point >= 0)
                std::cout << ", point " << rep.point;
            std::cout << " (" << rep.detail << ")" << std::endl;
            return 1;
    }
    return 2;
}

int cmd_patchwork(const std::string& path, bool regions, const std::string& export_path)
{
    auto raw = io::load_file(path);
    if (raw.contains("kind") && raw["kind"] == "complex")
    {
        PatchworkComplex complex = io::complex_from_json(raw);
        std::cout << betti_line(complex.betti()) << std::endl;
        return 0;
    }
    auto doc = io::triangulation_from_json(raw);
    if (!doc.signs)
        throw ParseError("patchwork needs a signs document");
    doc.tau.certified = certify_convexity(doc.tau).ok();
    if (!doc.tau.certified)
    {
        std::cout << "NOT CONVEX: stored lift does not certify the cells" << std::endl;
        return 1;
    }
    PatchworkComplex complex = hypersurface_complex(doc.tau, *doc.signs);
    std::cout << betti_line(complex.betti()) << std::endl;
    if (regions)
    {
        RegionComplex plus = region_complex(doc.tau, *doc.signs, +1);
        RegionComplex minus = region_complex(doc.tau, *doc.signs, -1);
        std::cout << "region +: components " << plus.component_count << " (open "
                  << plus.open_components() << ", closed " << plus.closed_components() << ")"
                  << std::endl;
        std::cout << "region -: components " << minus.component_count << " (open "
                  << minus.open_components() << ", closed " << minus.closed_components() << ")"
                  << std::endl;
        std::cout << "double plane b0 = " << double_plane_b0(plus) << std::endl;
    }
    if (!export_path.empty())
        io::save_file(export_path, io::complex_to_json(complex));
    return 0;
}

int cmd_ambient(const std::string& path)
{
    auto doc = io::triangulation_from_json(io::load_file(path));
    if (!doc.tau.lift)
        throw ParseError("ambient needs a certified triangulation document");
    doc.tau.certified = certify_convexity(doc.tau).ok();
    if (!doc.tau.certified)
    {
        std::cout << "NOT CONVEX: stored lift does not certify the cells" << std::endl;
        return 1;
    }
    PatchworkComplex complex = ambient_complex(doc.tau);
    std::cout << betti_line(complex.betti()) << std::endl;
    return 0;
}

int cmd_mixed(const AffinePairLift& lift, bool verify)
{
    auto sigma = mixedness(lift);
    if (!sigma)
    {
        std::cout << "NOT MIXED: coinciding keys 2a_i - b_i:";
        for (int i = 0; i <= lift.n; ++i)
            for (int j = i + 1; j <= lift.n; ++j)
                if (lift.key(i) == lift.key(j))
                    std::cout << " (" << i << "," << j << ")=" << format_rational(lift.key(i));
        std::cout << std::endl;
        if (verify)
        {
            auto oracle = lower_hull_oracle(lift);
            std::cout << (representation_is_mixed(lift, oracle) ? "oracle mismatch"
                                                                : "oracle match (not mixed)")
                      << std::endl;
        }
        return 0;
    }
    std::cout << "sigma = (";
    for (std::size_t i = 0; i < sigma->size(); ++i)
        std::cout << (i ? " " : "") << (*sigma)[i];
    std::cout << ")" << std::endl;
    MixedSubdivision ms = mixed_subdivision(lift);
    for (std::size_t l = 0; l < ms.cells.size(); ++l)
    {
        const auto& cell = ms.cells[l];
        std::cout << "F_" << l << ": u {";
        for (std::size_t i = 0; i < cell.u_indices.size(); ++i)
            std::cout << (i ? "," : "") << cell.u_indices[i];
        std::cout << "} + v {";
        for (std::size_t i = 0; i < cell.v_indices.size(); ++i)
            std::cout << (i ? "," : "") << cell.v_indices[i];
        std::cout << "}  volume " << format_rational(cell.poly.volume()) << std::endl;
    }
    if (verify)
    {
        auto oracle = lower_hull_oracle(lift);
        bool match = oracle.cells.size() == ms.cells.size();
        if (match)
        {
            std::set<std::vector<int>> oracle_cells(oracle.cells.begin(), oracle.cells.end());
            for (const auto& cell : ms.cells)
            {
                std::vector<int> pts;
                for (int i = 0; i < oracle.config.size(); ++i)
                    if (cell.poly.contains(oracle.config.points[static_cast<std::size_t>(i)]))
                        pts.push_back(i);
                if (!oracle_cells.count(pts))
                {
                    match = false;
                    break;
                }
            }
        }
        std::cout << (match ? "oracle match" : "oracle mismatch") << std::endl;
        if (!match)
            return 1;
    }
    return 0;
}

int cmd_doubled_line(const io::DoubledLineDocument& doc)
{
    long b0;
    try
    {
        b0 = doubled_b0_line(doc.roots_k, doc.roots_2k, doc.lead_sign);
    }
    catch (const std::domain_error& e)
    {
        std::cout << e.what() << std::endl;
        return 1;
    }
    std::cout << "b0 = " << b0 << std::endl;
    for (const Rat& r : doc.roots_k)
    {
        long above = 0;
        for (const Rat& s : doc.roots_2k)
            if (s > r)
                ++above;
        int sign = (above % 2 == 0) ? doc.lead_sign : -doc.lead_sign;
        std::cout << "root " << format_rational(r) << ": sign " << (sign > 0 ? "+" : "-")
                  << std::endl;
    }
    return 0;
}

int cmd_bounds(bool table, int max_n, const std::string& seeds_csv, const std::string& t_gap_range)
{
    Seeds seeds;
    std::optional<Rat> delta12;
    if (!seeds_csv.empty())
    {
        auto values = parse_rational_list(seeds_csv);
        if (values.empty() || values.size() > 2)
            throw ParseError("--seeds expects delta02[,delta12]");
        seeds.delta02 = values[0];
        if (values.size() == 2)
            delta12 = values[1];
    }
    if (table)
    {
        auto rows = table1(max_n, seeds);
        for (int n = 1; n <= max_n; ++n)
        {
            const auto& r = rows[static_cast<std::size_t>(n) - 1];
            std::cout << "n=" << n << "  zeta: " << format_rational(r.zeta_lower) << " (~"
                      << decimal_approx(r.zeta_lower) << ") .. " << format_rational(r.zeta_upper)
                      << " (~" << decimal_approx(r.zeta_upper) << ")"
                      << "  delta: " << format_rational(r.delta_lower) << " (~"
                      << decimal_approx(r.delta_lower) << ") .. "
                      << format_rational(r.delta_upper) << " (~"
                      << decimal_approx(r.delta_upper) << ")" << std::endl;
        }
    }
    if (!seeds_csv.empty())
    {
        auto lows = recursive_lower_bounds(std::max(3, max_n), seeds);
        std::cout << "zeta_{0,3} >= " << format_rational(lows.zeta0(3)) << std::endl;
        if (delta12)
        {
            auto [z03, z13] = surface_bounds(seeds.delta02, *delta12);
            std::cout << "surface: zeta_{0,3} >= " << format_rational(z03)
                      << ", zeta_{1,3} >= " << format_rational(z13) << std::endl;
        }
    }
    if (!t_gap_range.empty())
    {
        auto dots = t_gap_range.find("..");
        int lo, hi;
        try
        {
            if (dots == std::string::npos)
                lo = hi = std::stoi(t_gap_range);
            else
            {
                lo = std::stoi(t_gap_range.substr(0, dots));
                hi = std::stoi(t_gap_range.substr(dots + 2));
            }
        }
        catch (const std::exception&)
        {
            throw ParseError("--t-gap expects N or LO..HI");
        }
        for (int n = lo; n <= hi; ++n)
        {
            TGap gap = t_gap_check(n, seeds);
            std::cout << "n=" << n << ": gap " << (gap.holds ? "holds" : "fails") << " ("
                      << format_rational(gap.recursive_zeta) << " vs "
                      << format_rational(gap.t_ceiling) << ")" << std::endl;
        }
    }
    return 0;
}

int cmd_harnack(int m, const std::string& out_path)
{
    ConvexTriangulation tau = primitive_triangulation(m, 2);
    SignDistribution s = harnack_signs(m);
    io::json doc = io::triangulation_to_json(tau, &s);
    if (out_path.empty())
        std::cout << doc.dump(2) << std::endl;
    else
        io::save_file(out_path, doc);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact combinatorial patchworking of real projective hypersurfaces"};
    app.require_subcommand(1);

    std::string path, export_path, out_path;
    bool betti = false, regions = false, verify = false, table = false;
    int max_n = 7, mixed_k = 1, mixed_n = 1, harnack_m = 4, lead_sign = -1;
    std::string mixed_a, mixed_b, roots_k, roots_2k, seeds_csv, t_gap_range, request_path;

    auto* certify = app.add_subcommand("certify", "check a stored convexity certificate");
    certify->add_option("file", path, "triangulation document")->required();

    auto* patch = app.add_subcommand("patchwork", "Betti numbers of a patchworked hypersurface");
    patch->add_option("file", path, "signs document (or exported complex)")->required();
    patch->add_flag("--betti", betti, "print Betti numbers (default)");
    patch->add_flag("--regions", regions, "print the sign-region census");
    patch->add_option("--export-complex", export_path, "write the glued complex to a file");

    auto* ambient = app.add_subcommand("ambient", "Betti numbers of the ambient complex");
    ambient->add_option("file", path, "triangulation document")->required();
    ambient->add_flag("--betti", betti, "print Betti numbers (default)");

    auto* mixed = app.add_subcommand("mixed", "mixed subdivision of a pair of affine lifts");
    mixed->add_option("file", path, "lift-pair document");
    mixed->add_option("--k", mixed_k, "dilation k of the first simplex");
    mixed->add_option("--n", mixed_n, "ambient dimension");
    mixed->add_option("--a", mixed_a, "comma-separated rationals a_0..a_n");
    mixed->add_option("--b", mixed_b, "comma-separated rationals b_0..b_n");
    mixed->add_flag("--verify", verify, "compare against the brute-force lower hull");

    auto* doubled = app.add_subcommand("doubled-line", "doubled components of the line model");
    doubled->add_option("file", path, "doubled-line document");
    doubled->add_option("--roots-k", roots_k, "roots of the degree-k factor");
    doubled->add_option("--roots-2k", roots_2k, "roots of the degree-2k factor");
    doubled->add_option("--lead-sign", lead_sign, "sign of the degree-2k factor at infinity");

    auto* bounds = app.add_subcommand("bounds", "exact bound tables and gap checks");
    bounds->add_flag("--table", table, "emit the lower/upper bound table");
    bounds->add_option("--max-n", max_n, "largest dimension row");
    bounds->add_option("--seeds", seeds_csv, "override seeds: delta02[,delta12]");
    bounds->add_option("--t-gap", t_gap_range, "check the T-construction gap for N or LO..HI");
    bounds->add_option("--request", request_path, "bounds-request document");

    auto* harnack = app.add_subcommand("harnack", "emit the Harnack fixture for degree m");
    harnack->add_option("--m", harnack_m, "even degree")->required();
    harnack->add_option("-o,--output", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (certify->parsed())
            return cmd_certify(path);
        if (patch->parsed())
            return cmd_patchwork(path, regions, export_path);
        if (ambient->parsed())
            return cmd_ambient(path);
        if (mixed->parsed())
        {
            AffinePairLift lift;
            if (!path.empty())
            {
                lift = io::lift_pair_from_json(io::load_file(path));
            }
            else
            {
                lift.k = mixed_k;
                lift.n = mixed_n;
                lift.a = parse_rational_list(mixed_a);
                lift.b = parse_rational_list(mixed_b);
                lift.validate();
            }
            return cmd_mixed(lift, verify);
        }
        if (doubled->parsed())
        {
            io::DoubledLineDocument doc;
            if (!path.empty())
            {
                doc = io::doubled_line_from_json(io::load_file(path));
            }
            else
            {
                doc.roots_k = parse_rational_list(roots_k);
                doc.roots_2k = parse_rational_list(roots_2k);
                doc.lead_sign = lead_sign;
            }
            return cmd_doubled_line(doc);
        }
        if (bounds->parsed())
        {
            if (!request_path.empty())
            {
                io::BoundsRequest req = io::bounds_request_from_json(io::load_file(request_path));
                max_n = req.max_n;
                table = true;
                if (req.seed_delta02)
                    seeds_csv = format_rational(*req.seed_delta02);
                if (req.t_gap)
                    t_gap_range = std::to_string(req.t_gap->first) + ".." +
                                  std::to_string(req.t_gap->second);
            }
            return cmd_bounds(table, max_n, seeds_csv, t_gap_range);
        }
        if (harnack->parsed())
            return cmd_harnack(harnack_m, out_path);
    }
    catch (const ParseError& e)
    {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    catch (const std::domain_error& e)
    {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "internal error: " << e.what() << std::endl;
        return 2;
    }
    return 2;
}
