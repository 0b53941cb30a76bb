/**
 * Bookkeeping for doubled hypersurfaces: the two-type component census, the
 * exact one-dimensional model of a small perturbation of a squared
 * polynomial, the isolated-vertex point count, and the Kunneth leading-term
 * sum feeding the recursive lower bounds.
 */

#ifndef PATCHWORK_DOUBLED_HPP
#define PATCHWORK_DOUBLED_HPP

#include "numeric.hpp"

namespace patchwork {

/** Betti numbers b_0..b_d of a space of dimension d. */
using BettiVector = std::vector<long>;

/** Census of the two component types of a doubled hypersurface. */
struct DoubledCensus {
    long boundary_components = 0;  // components of RX_{k,+} with boundary
    long closed_components = 0;    // components of RX_k inside { f_{2k} > 0 }
};

/** Components with boundary double once, closed components twice. */
inline long doubled_b0_census(const DoubledCensus& census)
{
    if (census.boundary_components < 0 || census.closed_components < 0)
        throw std::invalid_argument("doubled_b0_census: counts must be nonnegative");
    return census.boundary_components + 2 * census.closed_components;
}

/**
 * Exact n = 1 model: the real roots of f_k are doubled wherever f_{2k} is
 * positive. The sign of f_{2k} at r is lead_sign * (-1)^(#roots above r).
 */
inline long doubled_b0_line(const std::vector<Rat>& roots_k, const std::vector<Rat>& roots_2k,
                            int lead_sign_2k)
{
    if (lead_sign_2k != 1 && lead_sign_2k != -1)
        throw std::invalid_argument("doubled_b0_line: lead sign must be +1 or -1");
    auto check_sorted = [](const std::vector<Rat>& roots, const char* which) {
        for (std::size_t i = 0; i + 1 < roots.size(); ++i)
            if (!(roots[i] < roots[i + 1]))
                throw std::invalid_argument(std::string("doubled_b0_line: ") + which +
                                            " roots must be strictly increasing");
    };
    check_sorted(roots_k, "degree-k");
    check_sorted(roots_2k, "degree-2k");
    if (roots_2k.size() % 2 != 0)
        throw std::invalid_argument("doubled_b0_line: the degree-2k factor needs an even root count");
    for (const Rat& r : roots_k)
        for (const Rat& s : roots_2k)
            if (r == s)
                throw std::domain_error("transversality violated: shared root");

    long doubled = 0;
    for (const Rat& r : roots_k)
    {
        long above = 0;
        for (const Rat& s : roots_2k)
            if (s > r)
                ++above;
        int sign = (above % 2 == 0) ? lead_sign_2k : -lead_sign_2k;
        if (sign > 0)
            doubled += 2;
    }
    return doubled;
}

/** The zero-dimensional doubled plane: two points or nothing, by sign. */
inline long y0_point_count(int constant_sign)
{
    if (constant_sign == 1)
        return 2;
    if (constant_sign == -1)
        return 0;
    throw std::invalid_argument("y0_point_count: sign must be +1 or -1");
}

/**
 * Leading-term contribution sum_{l=1}^{n} sum_p bx[l][p] * by[l][i-p], with
 * out-of-range entries read as zero. bx[l] describes a space of dimension
 * l-1, by[l] one of dimension n-l (both 1-indexed by l here).
 */
inline long kunneth_leading(int i, const std::vector<BettiVector>& bx,
                            const std::vector<BettiVector>& by)
{
    if (bx.size() != by.size())
        throw std::invalid_argument("kunneth_leading: factor lists must have equal length");
    const int n = static_cast<int>(bx.size());
    for (int l = 1; l <= n; ++l)
    {
        if (static_cast<int>(bx[static_cast<std::size_t>(l) - 1].size()) > l)
            throw std::invalid_argument("kunneth_leading: bx[l] exceeds dimension l-1");
        if (static_cast<int>(by[static_cast<std::size_t>(l) - 1].size()) > n - l + 1)
            throw std::invalid_argument("kunneth_leading: by[l] exceeds dimension n-l");
    }
    auto at = [](const BettiVector& v, int idx) -> long {
        if (idx < 0 || idx >= static_cast<int>(v.size()))
            return 0;
        return v[static_cast<std::size_t>(idx)];
    };
    long total = 0;
    for (int l = 1; l <= n; ++l)
        for (int p = 0; p <= i; ++p)
            total += at(bx[static_cast<std::size_t>(l) - 1], p) *
                     at(by[static_cast<std::size_t>(l) - 1], i - p);
    return total;
}

}  // namespace patchwork

#endif  // PATCHWORK_DOUBLED_HPP
