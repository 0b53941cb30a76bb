/**
 * Exact-rational bounds: total Betti numbers of hypersurfaces and double
 * planes, leading Hodge coefficients, the upper bounds from the classical
 * inequalities, the recursive lower bounds, the surface bounds, the
 * T-construction gap check, and the assembled table.
 */

#ifndef PATCHWORK_BOUNDS_HPP
#define PATCHWORK_BOUNDS_HPP

#include "numeric.hpp"

namespace patchwork {

namespace detail {

inline Int int_pow(Int base, int exp)
{
    Int out = 1;
    for (int i = 0; i < exp; ++i)
        out *= base;
    return out;
}

inline Int factorial(int n)
{
    Int out = 1;
    for (int i = 2; i <= n; ++i)
        out *= i;
    return out;
}

inline Int binomial(int a, int b)
{
    if (b < 0 || b > a)
        return 0;
    Int out = 1;
    for (int i = 0; i < b; ++i)
        out = out * (a - i) / (i + 1);
    return out;
}

}  // namespace detail

/** b_*(X_m^n) = ((m-1)^{n+1} + (-1)^n)/m + n + (-1)^{n+1}. */
inline Int total_betti_hypersurface(const Int& m, int n)
{
    if (m < 1 || n < 1)
        throw std::invalid_argument("total_betti_hypersurface: m, n must be positive");
    Int numerator = detail::int_pow(m - 1, n + 1) + (n % 2 == 0 ? 1 : -1);
    if (numerator % m != 0)
        throw std::logic_error("total_betti_hypersurface: non-integral value");
    return numerator / m + n + (n % 2 == 0 ? -1 : 1);
}

/** b_*(Y_{2k}^n) = ((2k-1)^{n+1} + (-1)^n)/(2k) + n + 1. */
inline Int total_betti_double_plane(const Int& k, int n)
{
    if (k < 1 || n < 0)
        throw std::invalid_argument("total_betti_double_plane: k >= 1, n >= 0 required");
    Int numerator = detail::int_pow(2 * k - 1, n + 1) + (n % 2 == 0 ? 1 : -1);
    if (numerator % (2 * k) != 0)
        throw std::logic_error("total_betti_double_plane: non-integral value");
    return numerator / (2 * k) + n + 1;
}

/** Leading coefficient of the central Hodge number of X_m^n (n odd). */
inline Rat hodge_c(int n)
{
    if (n < 1 || n % 2 == 0)
        throw std::invalid_argument("hodge_c: n must be odd");
    Rat sum(0);
    for (int j = 1; j <= (n + 1) / 2; ++j)
    {
        Int term = detail::binomial(n + 1, (n + 1) / 2 - j) * detail::int_pow(j, n);
        sum += Rat(j % 2 == 0 ? term : -term);
    }
    Rat sign((n + 1) / 2 % 2 == 0 ? 1 : -1);
    return sign * sum / Rat(detail::factorial(n));
}

/** Leading coefficient of the central Hodge number of Y_{2k}^n (n even). */
inline Rat hodge_cprime(int n)
{
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("hodge_cprime: n must be even and >= 2");
    auto a_jn = [&](int j) {
        Int s = 0;
        for (int t = 1; t <= 2 * j - 1; ++t)
            s += detail::int_pow(t, n);
        return s;
    };
    Rat first(0);
    for (int j = 1; j <= n / 2 + 1; ++j)
    {
        Int term = detail::binomial(n + 2, n / 2 + 1 - j) * a_jn(j);
        first += Rat(j % 2 == 0 ? term : -term);
    }
    Rat second(0);
    for (int j = 1; j <= n / 2; ++j)
    {
        Int term = detail::binomial(n + 1, n / 2 - j) * detail::int_pow(j, n);
        second += Rat(j % 2 == 0 ? term : -term);
    }
    Rat sign(n / 2 % 2 == 0 ? -1 : 1);
    return sign * (first + Rat(detail::int_pow(2, n)) * second) / Rat(detail::factorial(n));
}

/** Upper bounds for zeta_{i,n} and delta_{i,n} from the classical inequalities. */
struct UpperBounds {
    Rat zeta;
    Rat delta;
};

inline UpperBounds upper_bounds(int i, int n)
{
    if (i < 0 || n < 1)
        throw std::invalid_argument("upper_bounds: need i >= 0, n >= 1");
    UpperBounds out;
    if (n % 2 == 0)
    {
        out.zeta = Rat(1, 2);
        Rat c = hodge_cprime(n);
        Rat base = Rat(detail::int_pow(2, n)) + c;
        out.delta = (i == n / 2) ? base / 2 : base / 4;
    }
    else
    {
        Rat c = hodge_c(n);
        out.zeta = (i == (n - 1) / 2) ? (1 + c) / 2 : (1 + c) / 4;
        out.delta = Rat(detail::int_pow(2, n - 1));
        if (i == 0)
        {
            // The sharper route: a component is positive or negative, so
            // delta_{0,n} <= 2^n zeta_{0,n}.
            Rat refined = Rat(detail::int_pow(2, n)) * out.zeta;
            if (refined < out.delta)
                out.delta = refined;
        }
    }
    return out;
}

/** Seed values for the recursion (the known low-dimensional estimates). */
struct Seeds {
    Rat zeta01 = Rat(1);
    Rat zeta02 = Rat(1, 2);
    Rat delta00 = Rat(2);
    Rat delta01 = Rat(1);
    Rat delta02 = Rat(27, 16);
};

/** Lower bounds zeta_{0,n}, delta_{0,n} indexed by n (delta from n = 0). */
struct LowerBounds {
    std::vector<Rat> zeta;   // zeta[n], n = 1..max_n
    std::vector<Rat> delta;  // delta[n], n = 0..max_n

    const Rat& zeta0(int n) const { return zeta[static_cast<std::size_t>(n) - 1]; }
    const Rat& delta0(int n) const { return delta[static_cast<std::size_t>(n)]; }
};

/**
 * The recursion: zeta_{0,n} >= (1/(2^n-2)) sum_{l=1}^{n-1} zeta_{0,l}
 * delta_{0,n-l}, then delta_{0,n} >= (2^n-1) zeta_{0,n}.
 */
inline LowerBounds recursive_lower_bounds(int max_n, const Seeds& seeds = Seeds{})
{
    if (max_n < 3)
        throw std::invalid_argument("recursive_lower_bounds: max_n must be at least 3");
    LowerBounds out;
    out.zeta = {seeds.zeta01, seeds.zeta02};
    out.delta = {seeds.delta00, seeds.delta01, seeds.delta02};
    for (int n = 3; n <= max_n; ++n)
    {
        Rat sum(0);
        for (int l = 1; l <= n - 1; ++l)
            sum += out.zeta0(l) * out.delta0(n - l);
        Rat two_n(detail::int_pow(2, n));
        Rat zeta = sum / (two_n - 2);
        out.zeta.push_back(zeta);
        out.delta.push_back(sum + zeta);  // = (2^n - 1) zeta
    }
    return out;
}

/** The easy explicit bound zeta_{0,n} >= 1/2^{n-1}. */
inline Rat explicit_lower(int n)
{
    if (n < 1)
        throw std::invalid_argument("explicit_lower: n must be positive");
    return Rat(1) / Rat(detail::int_pow(2, n - 1));
}

/** Surface bounds: (d02/6 + 1/12, d12/6 + 1/6). */
inline std::pair<Rat, Rat> surface_bounds(const Rat& delta02_lower, const Rat& delta12_lower)
{
    return {delta02_lower / 6 + Rat(1, 12), delta12_lower / 6 + Rat(1, 6)};
}

/** Comparison of the recursive bound against the T-construction ceiling. */
struct TGap {
    bool holds = false;
    Rat recursive_zeta;  // lower bound for zeta_{0,n}
    Rat t_ceiling;       // 2^{n-1} / n!
};

inline TGap t_gap_check(int n, const Seeds& seeds = Seeds{})
{
    if (n < 4)
        throw std::invalid_argument("t_gap_check: n must be at least 4");
    TGap out;
    out.recursive_zeta = recursive_lower_bounds(n, seeds).zeta0(n);
    out.t_ceiling = Rat(detail::int_pow(2, n - 1)) / Rat(detail::factorial(n));
    out.holds = out.recursive_zeta > out.t_ceiling;
    return out;
}

/** One table row: lower/upper bounds for zeta_{0,n} and delta_{0,n}. */
struct BoundsRow {
    Rat zeta_lower, zeta_upper, delta_lower, delta_upper;
};

/**
 * Assemble the bounds table for n = 1..max_n: lower columns from the
 * recursion, upper columns from the classical inequalities (with the
 * sharper doubled-plane route for odd n).
 */
inline std::vector<BoundsRow> table1(int max_n = 7, const Seeds& seeds = Seeds{})
{
    if (max_n < 1)
        throw std::invalid_argument("table1: max_n must be positive");
    LowerBounds lower;
    if (max_n >= 3)
    {
        lower = recursive_lower_bounds(max_n, seeds);
    }
    else
    {
        lower.zeta = {seeds.zeta01, seeds.zeta02};
        lower.delta = {seeds.delta00, seeds.delta01, seeds.delta02};
    }
    std::vector<BoundsRow> rows;
    for (int n = 1; n <= max_n; ++n)
    {
        BoundsRow row;
        row.zeta_lower = lower.zeta0(n);
        row.delta_lower = lower.delta0(n);
        UpperBounds up = upper_bounds(0, n);
        row.zeta_upper = up.zeta;
        row.delta_upper = up.delta;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace patchwork

#endif  // PATCHWORK_BOUNDS_HPP
