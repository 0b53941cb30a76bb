/**
 * Acceptance suite: runs every acceptance criterion at its stated tolerance
 * and prints one pass/fail line per criterion. Exits nonzero if any fails.
 */

#include "patchwork/bounds.hpp"
#include "patchwork/doubled.hpp"
#include "patchwork/io.hpp"
#include "patchwork/mixed.hpp"
#include "patchwork/patchwork.hpp"

#include "oracle_support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sys/wait.h>

namespace {

using namespace patchwork;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int criterion, bool pass, const std::string& what)
{
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " - " << what
              << std::endl;
    if (!pass)
        ++failures;
}

void run_criterion(int criterion, const std::string& what, const std::function<bool()>& body)
{
    bool pass = false;
    std::string detail = what;
    try
    {
        pass = body();
    }
    catch (const std::exception& e)
    {
        detail += std::string(" [exception: ") + e.what() + "]";
    }
    report(criterion, pass, detail);
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::pair<int, std::string> run_cli(const std::string& args)
{
    std::string cmd = std::string(PATCHWORK_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof(buf), pipe))
        out.append(buf, got);
    int rc = pclose(pipe);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

/* 1. Table reproduction through the CLI, exact, under one second. */
bool criterion_table()
{
    const char* expected[7][4] = {
        {"1/1", "1/1", "1/1", "1/1"},
        {"1/2", "1/2", "27/16", "7/4"},
        {"35/96", "5/12", "245/96", "10/3"},
        {"361/1344", "1/2", "1805/448", "307/48"},
        {"22181/107520", "31/80", "687611/107520", "62/5"},
        {"1612753/9999360", "1/2", "1612753/158720", "17407/720"},
        {"854473649/6719569920", "233/630", "108518153423/6719569920", "14912/315"},
    };
    auto start = Clock::now();
    auto [status, out] = run_cli("bounds --table --max-n 7");
    double elapsed = seconds_since(start);
    if (status != 0 || elapsed >= 1.0)
        return false;
    std::stringstream ss(out);
    std::string line;
    int row = 0;
    while (std::getline(ss, line) && row < 7)
    {
        if (line.rfind("n=", 0) != 0)
            continue;
        for (int c = 0; c < 4; ++c)
            if (line.find(expected[row][c]) == std::string::npos)
                return false;
        ++row;
    }
    return row == 7;
}

/* 2. Hodge coefficients, exact, under one second. */
bool criterion_hodge()
{
    auto start = Clock::now();
    bool ok = hodge_c(3) == parse_rational("2/3") && hodge_c(5) == parse_rational("11/20") &&
              hodge_c(7) == parse_rational("151/315") && hodge_cprime(2) == Rat(3) &&
              hodge_cprime(4) == parse_rational("115/12") &&
              hodge_cprime(6) == parse_rational("5887/180");
    return ok && seconds_since(start) < 1.0;
}

/* 3. Surface bounds for both seed choices, exact. */
bool criterion_surface()
{
    auto [a0, a1] = surface_bounds(parse_rational("27/16"), parse_rational("27/8"));
    auto [b0, b1] = surface_bounds(parse_rational("5/3"), parse_rational("10/3"));
    return a0 == parse_rational("35/96") && a1 == parse_rational("35/48") &&
           b0 == parse_rational("13/36") && b1 == parse_rational("13/18");
}

/* 4. Gap over the T-construction ceiling and dominance of the easy bound. */
bool criterion_gap()
{
    for (int n : {5, 6, 7})
        if (!t_gap_check(n).holds)
            return false;
    auto lows = recursive_lower_bounds(12);
    Seeds degraded;
    degraded.delta02 = Rat(1);
    auto weak = recursive_lower_bounds(12, degraded);
    for (int n = 3; n <= 12; ++n)
    {
        if (!(lows.zeta0(n) >= explicit_lower(n)))
            return false;
        if (!(weak.zeta0(n) >= explicit_lower(n)))
            return false;
    }
    return true;
}

/* 5. Harnack maxima: exhaustive for m <= 4, attained up to m = 8. */
bool criterion_harnack()
{
    auto start = Clock::now();
    for (int m : {2, 3, 4})
    {
        auto tau = primitive_triangulation(m, 2);
        CurveComponentCounter counter(tau);
        long best = 0;
        std::uint64_t total = 1ull << counter.point_count();
        for (std::uint64_t mask = 0; mask < total; ++mask)
            best = std::max(best, counter.b0_mask(mask));
        if (best != (m - 1) * (m - 2) / 2 + 1)
            return false;
    }
    if (seconds_since(start) >= 300.0)
        return false;

    for (int m : {2, 4, 6})
    {
        auto H = hypersurface_complex(primitive_triangulation(m, 2), harnack_signs(m));
        if (H.betti()[0] != (m - 1) * (m - 2) / 2 + 1)
            return false;
    }
    auto start8 = Clock::now();
    auto H8 = hypersurface_complex(primitive_triangulation(8, 2), harnack_signs(8));
    if (H8.betti()[0] != 22)
        return false;
    return seconds_since(start8) < 10.0;
}

/* 6. Smith-Thom ceiling on a thousand random curves per degree. */
bool criterion_smith_thom()
{
    std::mt19937 rng(101);
    for (int m = 1; m <= 6; ++m)
    {
        auto tau = primitive_triangulation(m, 2);
        CurveComponentCounter counter(tau);
        Int ceiling = total_betti_hypersurface(Int(m), 2);
        for (int trial = 0; trial < 1000; ++trial)
        {
            SignDistribution s(static_cast<std::size_t>(tau.config.size()));
            for (auto& v : s)
                v = (rng() & 1u) ? 1 : -1;
            // Closed curves: b_* = 2 b_0; check through the full complex on a
            // subsample and through the fast counter everywhere.
            long b0 = counter.b0(s);
            if (Int(2 * b0) > ceiling)
                return false;
            if (trial % 100 == 0)
            {
                auto b = hypersurface_complex(tau, s).betti();
                if (b[0] != b0 || Int(b[0] + b[1]) > ceiling)
                    return false;
            }
        }
    }
    return true;
}

/* 7. Ambient topology of the named pairs. */
bool criterion_ambient()
{
    auto start = Clock::now();
    for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {2, 3}, {2, 4},
                                                        {3, 2}, {3, 3}})
    {
        auto complex = ambient_complex(primitive_triangulation(m, n));
        std::vector<long> expect(static_cast<std::size_t>(n) + 1, 1);
        if (complex.betti() != expect)
            return false;
    }
    return seconds_since(start) < 120.0;
}

/* 8. Mixed subdivision against the brute-force oracle. */
bool criterion_mixed()
{
    std::mt19937 rng(103);
    std::uniform_int_distribution<int> num(-6, 6), den_pow(0, 2);
    auto random_rat = [&]() { return Rat(num(rng), 1 << den_pow(rng)); };
    auto random_lift = [&]() {
        AffinePairLift lift;
        lift.n = 1 + static_cast<int>(rng() % 3u);
        lift.k = 1 + static_cast<int>(rng() % 2u);
        for (int i = 0; i <= lift.n; ++i)
        {
            lift.a.push_back(random_rat());
            lift.b.push_back(random_rat());
        }
        return lift;
    };

    int mixed_checked = 0;
    while (mixed_checked < 200)
    {
        AffinePairLift lift = random_lift();
        auto sigma = mixedness(lift);
        if (!sigma)
            continue;
        ++mixed_checked;
        auto ms = mixed_subdivision(lift);
        auto oracle = lower_hull_oracle(lift);
        if (ms.cells.size() != oracle.cells.size())
            return false;
        std::set<std::vector<int>> oracle_cells(oracle.cells.begin(), oracle.cells.end());
        Rat vol(0);
        for (const auto& cell : ms.cells)
        {
            std::vector<int> pts;
            for (int i = 0; i < oracle.config.size(); ++i)
                if (cell.poly.contains(oracle.config.points[static_cast<std::size_t>(i)]))
                    pts.push_back(i);
            if (!oracle_cells.count(pts))
                return false;
            vol += cell.poly.volume();
        }
        if (vol != standard_simplex(3 * lift.k, lift.n).volume())
            return false;
    }

    int degenerate_checked = 0;
    while (degenerate_checked < 50)
    {
        AffinePairLift lift = random_lift();
        // Force two keys to coincide.
        int i = static_cast<int>(rng() % static_cast<unsigned>(lift.n + 1));
        int j = static_cast<int>(rng() % static_cast<unsigned>(lift.n + 1));
        if (i == j)
            continue;
        lift.a[static_cast<std::size_t>(j)] =
            (lift.key(i) + lift.b[static_cast<std::size_t>(j)]) / 2;
        if (mixedness(lift))
            continue;
        ++degenerate_checked;
        auto oracle = lower_hull_oracle(lift);
        if (representation_is_mixed(lift, oracle))
            return false;
        Rat vol(0);
        for (std::size_t c = 0; c < oracle.cells.size(); ++c)
            vol += oracle.cell_polytope(static_cast<int>(c)).volume();
        if (vol != standard_simplex(3 * lift.k, lift.n).volume())
            return false;
    }
    return true;
}

/* 9. Doubled line model against the witness oracle. */
bool criterion_doubled()
{
    std::mt19937 rng(107);
    const Rat eps(1, 1000000);
    for (int trial = 0; trial < 200; ++trial)
    {
        auto inst = oracle::random_line_instance(rng);
        long b0 = doubled_b0_line(inst.roots_k, inst.roots_2k, inst.lead_sign);
        if (b0 % 2 != 0)
            return false;
        oracle::Poly h =
            oracle::doubled_witness(inst.roots_k, inst.roots_2k, inst.lead_sign, eps);
        if (oracle::count_real_roots(h) != b0)
            return false;
        if (doubled_b0_census({0, b0 / 2}) != b0)
            return false;
    }
    return true;
}

/* 10. Documented desk-scale proxy for the asymptotics. */
bool criterion_desk_scale()
{
    std::cout << "  note: the asymptotic limits themselves, the degree-two doubled-plane\n"
                 "  seed constructions, and high-degree extremal hypersurfaces are not\n"
                 "  reproducible at desk scale; the property suites above stand in for\n"
                 "  them. A fixed degree-6 curve documents the finite-degree approach:\n";
    auto H = hypersurface_complex(primitive_triangulation(6, 2), harnack_signs(6));
    long b0 = H.betti()[0];
    std::cout << "  degree 6: b0 = " << b0 << ", b0/m^2 = " << b0 << "/36" << std::endl;
    return b0 == 11 && Rat(b0, 36) >= Rat(3, 10);
}

}  // namespace

int main()
{
    run_criterion(1, "table emitted exactly through the CLI in under a second",
                  criterion_table);
    run_criterion(2, "central Hodge coefficients, exact", criterion_hodge);
    run_criterion(3, "surface bounds for both seed pairs, exact", criterion_surface);
    run_criterion(4, "T-construction gap for n = 5, 6, 7 and dominance for n <= 12",
                  criterion_gap);
    run_criterion(5, "exhaustive Harnack maxima (m <= 4) and attainment up to degree 8",
                  criterion_harnack);
    run_criterion(6, "Smith-Thom ceiling over 1000 random curves per degree",
                  criterion_smith_thom);
    run_criterion(7, "ambient complexes carry the Betti numbers of projective space",
                  criterion_ambient);
    run_criterion(8, "mixed subdivisions equal the brute-force lower hull (200 + 50 lifts)",
                  criterion_mixed);
    run_criterion(9, "doubled line model matches the witness oracle on 200 instances",
                  criterion_doubled);
    run_criterion(10, "desk-scale proxy documented; degree-6 ratio at least 3/10",
                  criterion_desk_scale);

    if (failures)
    {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
