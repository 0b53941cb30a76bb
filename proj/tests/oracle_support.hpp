/**
 * Test-only oracles: exact univariate polynomial arithmetic over the
 * rationals, Sturm-chain real-root counting, and witness polynomials for the
 * one-dimensional doubled model. Independent of the library implementation
 * paths they validate.
 */

#ifndef PATCHWORK_TESTS_ORACLE_SUPPORT_HPP
#define PATCHWORK_TESTS_ORACLE_SUPPORT_HPP

#include "patchwork/numeric.hpp"

#include <random>

namespace oracle {

using patchwork::Rat;
using Poly = std::vector<Rat>;  // coefficients, constant term first

inline Poly trim(Poly p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
    return p;
}

inline Poly mul(const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty())
        return {};
    Poly out(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return trim(out);
}

inline Poly sub(Poly a, const Poly& b)
{
    if (a.size() < b.size())
        a.resize(b.size(), Rat(0));
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] -= b[i];
    return trim(a);
}

inline Poly scale(Poly a, const Rat& c)
{
    for (Rat& x : a)
        x *= c;
    return trim(a);
}

inline Poly derivative(const Poly& p)
{
    Poly out;
    for (std::size_t i = 1; i < p.size(); ++i)
        out.push_back(Rat(static_cast<long>(i)) * p[i]);
    return trim(out);
}

inline Rat eval(const Poly& p, const Rat& x)
{
    Rat v(0);
    for (std::size_t i = p.size(); i-- > 0;)
        v = v * x + p[i];
    return v;
}

/** Remainder of the polynomial division a / b (b nonzero). */
inline Poly rem(Poly a, const Poly& b)
{
    a = trim(a);
    while (a.size() >= b.size() && !a.empty())
    {
        Rat c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] -= c * b[i];
        a = trim(a);
    }
    return a;
}

inline int sign_at_infinity(const Poly& p, bool positive)
{
    if (p.empty())
        return 0;
    int lead = p.back() > 0 ? 1 : -1;
    if (positive || (p.size() - 1) % 2 == 0)
        return lead;
    return -lead;
}

/** Number of distinct real roots by Sturm's theorem. */
inline long count_real_roots(const Poly& p0)
{
    Poly p = trim(p0);
    if (p.size() <= 1)
        return 0;
    std::vector<Poly> chain{p, derivative(p)};
    while (!chain.back().empty() && chain.back().size() > 1)
    {
        Poly r = rem(chain[chain.size() - 2], chain.back());
        if (r.empty())
            break;
        chain.push_back(scale(r, Rat(-1)));
    }
    auto variations = [&](bool positive) {
        int count = 0, last = 0;
        for (const Poly& q : chain)
        {
            int s = sign_at_infinity(q, positive);
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++count;
            last = s;
        }
        return count;
    };
    return variations(false) - variations(true);
}

/**
 * Count sign changes of p over a uniform grid, refined until two consecutive
 * refinements agree. Resolves root pairs down to spacing (hi-lo)/2^18.
 */
inline long grid_root_count(const Poly& p, const Rat& lo, const Rat& hi)
{
    long prev = -1;
    for (int level = 14; level <= 18; ++level)
    {
        long steps = 1L << level;
        long count = 0;
        Rat step = (hi - lo) / Rat(steps);
        int last = 0;
        for (long i = 0; i <= steps; ++i)
        {
            Rat v = eval(p, lo + Rat(i) * step);
            int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
            if (s == 0)
            {
                ++count;  // grid hit a root exactly
                last = 0;
                continue;
            }
            if (last != 0 && s != last)
                ++count;
            last = s;
        }
        if (count == prev)
            return count;
        prev = count;
    }
    return prev;
}

inline Poly from_roots(const std::vector<Rat>& roots)
{
    Poly p{Rat(1)};
    for (const Rat& r : roots)
        p = mul(p, Poly{-r, Rat(1)});
    return p;
}

/**
 * Witness polynomial for the doubled line model: f_k^2 - eps * f_2k with
 * explicit factors through the given roots.
 */
inline Poly doubled_witness(const std::vector<Rat>& roots_k, const std::vector<Rat>& roots_2k,
                            int lead_sign, const Rat& eps)
{
    Poly f = from_roots(roots_k);
    Poly g = scale(from_roots(roots_2k), Rat(lead_sign));
    return sub(mul(f, f), scale(g, eps));
}

/** Random instance on the half-integer grid, valid for eps = 1e-6. */
struct LineInstance {
    std::vector<Rat> roots_k;
    std::vector<Rat> roots_2k;
    int lead_sign = -1;
};

inline LineInstance random_line_instance(std::mt19937& rng, int max_roots_k = 3,
                                         int max_pairs = 2)
{
    std::uniform_int_distribution<int> halves(-8, 8);
    auto draw_distinct = [&](std::size_t count, std::set<Rat>& used) {
        std::vector<Rat> out;
        while (out.size() < count)
        {
            Rat r(halves(rng), 2);
            if (used.insert(r).second)
                out.push_back(r);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    LineInstance inst;
    std::set<Rat> used;
    std::uniform_int_distribution<int> nk(1, max_roots_k), pairs(0, max_pairs);
    inst.roots_k = draw_distinct(static_cast<std::size_t>(nk(rng)), used);
    inst.roots_2k = draw_distinct(2 * static_cast<std::size_t>(pairs(rng)), used);
    bool degree_heavy = inst.roots_2k.size() > 2 * inst.roots_k.size();
    inst.lead_sign = degree_heavy ? -1 : ((rng() & 1u) ? 1 : -1);
    return inst;
}

}  // namespace oracle

#endif  // PATCHWORK_TESTS_ORACLE_SUPPORT_HPP
