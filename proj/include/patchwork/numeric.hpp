/**
 * Exact scalar types and small exact linear-algebra helpers shared by all
 * modules: arbitrary-precision integers/rationals (GMP-backed), Eigen dense
 * types over those scalars, fraction-free determinants, integer kernel
 * lattices, and rational formatting.
 */

#ifndef PATCHWORK_NUMERIC_HPP
#define PATCHWORK_NUMERIC_HPP

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace patchwork {

// Expression templates stay off: Eigen requires plain value semantics from
// its scalar type.
using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;

using IntVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using RatVec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;

/** Thrown by CLI/file readers on malformed input. */
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline IntVec make_point(std::initializer_list<long> coords)
{
    IntVec v(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (long c : coords)
        v(i++) = c;
    return v;
}

inline RatVec to_rational(const IntVec& v)
{
    RatVec r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        r(i) = Rat(v(i));
    return r;
}

inline RatMat to_rational(const IntMat& m)
{
    RatMat r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            r(i, j) = Rat(m(i, j));
    return r;
}

inline bool lex_less(const IntVec& a, const IntVec& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
        if (a(i) != b(i))
            return a(i) < b(i);
    }
    return false;
}

inline bool points_equal(const IntVec& a, const IntVec& b)
{
    if (a.size() != b.size())
        return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) != b(i))
            return false;
    return true;
}

struct IntVecLess {
    bool operator()(const IntVec& a, const IntVec& b) const { return lex_less(a, b); }
};

/** Fraction-free (Bareiss) determinant of a square integer matrix. */
inline Int int_det(IntMat m)
{
    const Eigen::Index n = m.rows();
    if (n != m.cols())
        throw std::invalid_argument("int_det: matrix must be square");
    if (n == 0)
        return 1;
    Int sign = 1, prev = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k)
    {
        if (m(k, k) == 0)
        {
            Eigen::Index p = k + 1;
            while (p < n && m(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            m.row(k).swap(m.row(p));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/** Exact determinant of a square rational matrix. */
inline Rat rat_det(const RatMat& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("rat_det: matrix must be square");
    if (m.rows() == 0)
        return 1;
    return Eigen::FullPivLU<RatMat>(m).determinant();
}

inline Eigen::Index rat_rank(const RatMat& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    Eigen::FullPivLU<RatMat> lu(m);
    return lu.rank();
}

/**
 * Solve A x = b exactly over the rationals. Returns std::nullopt when the
 * system is inconsistent; when the solution is not unique an arbitrary
 * solution of the affine solution set is returned.
 */
inline std::optional<RatVec> solve_exact(const RatMat& A, const RatVec& b)
{
    Eigen::FullPivLU<RatMat> lu(A);
    RatVec x = lu.solve(b);
    if ((A * x - b).isZero(0))
        return x;
    return std::nullopt;
}

/** Affine rank (dimension of the affine hull) of a point list. */
inline int affine_rank(const std::vector<IntVec>& pts)
{
    if (pts.empty())
        return -1;
    if (pts.size() == 1)
        return 0;
    RatMat edges(static_cast<Eigen::Index>(pts.size()) - 1, pts[0].size());
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (Eigen::Index j = 0; j < pts[0].size(); ++j)
            edges(static_cast<Eigen::Index>(i) - 1, j) = Rat(pts[i](j) - pts[0](j));
    return static_cast<int>(rat_rank(edges));
}

/**
 * Basis of the lattice { x in Z^n : A x = 0 } for an integer matrix A,
 * computed by unimodular column reduction. The returned vectors generate the
 * full (saturated) kernel lattice.
 */
inline std::vector<IntVec> integer_kernel_basis(const IntMat& A)
{
    const Eigen::Index rows = A.rows(), n = A.cols();
    IntMat M = A;
    IntMat U = IntMat::Identity(n, n);
    Eigen::Index front = 0;
    for (Eigen::Index r = 0; r < rows && front < n; ++r)
    {
        // Chip away at row r with gcd-style column operations until at most
        // one entry at or beyond the frontier is nonzero.
        while (true)
        {
            Eigen::Index best = -1;
            int nonzero = 0;
            for (Eigen::Index c = front; c < n; ++c)
            {
                if (M(r, c) != 0)
                {
                    ++nonzero;
                    if (best < 0 || abs(M(r, c)) < abs(M(r, best)))
                        best = c;
                }
            }
            if (nonzero == 0)
                break;
            if (best != front)
            {
                M.col(front).swap(M.col(best));
                U.col(front).swap(U.col(best));
            }
            if (nonzero == 1)
            {
                ++front;
                break;
            }
            for (Eigen::Index c = front + 1; c < n; ++c)
            {
                if (M(r, c) == 0)
                    continue;
                Int q = M(r, c) / M(r, front);
                if (q != 0)
                {
                    M.col(c) -= q * M.col(front);
                    U.col(c) -= q * U.col(front);
                }
            }
        }
    }
    std::vector<IntVec> basis;
    for (Eigen::Index c = front; c < n; ++c)
        basis.push_back(U.col(c));
    return basis;
}

inline Int int_gcd(Int a, Int b)
{
    return boost::multiprecision::gcd(a, b);
}

/** Scale a rational vector to a primitive integer vector (gcd 1). */
inline IntVec primitive_integer_vector(const RatVec& v)
{
    Int l = 1;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        l = l / int_gcd(l, denominator(v(i))) * denominator(v(i));
    IntVec w(v.size());
    Int g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        w(i) = numerator(v(i)) * (l / denominator(v(i)));
        g = int_gcd(g, w(i));
    }
    if (g > 1)
        for (Eigen::Index i = 0; i < v.size(); ++i)
            w(i) /= g;
    return w;
}

inline Rat parse_rational(const std::string& s)
{
    auto slash = s.find('/');
    try
    {
        if (slash == std::string::npos)
            return Rat(Int(s));
        Int p(s.substr(0, slash));
        Int q(s.substr(slash + 1));
        if (q <= 0)
            throw ParseError("rational denominator must be positive: " + s);
        return Rat(p) / Rat(q);
    }
    catch (const std::exception& e)
    {
        throw ParseError("malformed rational '" + s + "'");
    }
}

/** Canonical "p/q" form with q > 0 and gcd(p, q) = 1. */
inline std::string format_rational(const Rat& r)
{
    return numerator(r).str() + "/" + denominator(r).str();
}

/** Exact fixed-point decimal approximation (round toward zero). */
inline std::string decimal_approx(const Rat& r, int digits = 4)
{
    Int scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    Int num = numerator(r) * scale;
    Int den = denominator(r);
    bool neg = num < 0;
    if (neg)
        num = -num;
    Int q = num / den;
    Int ip = q / scale, fp = q % scale;
    std::string frac = fp.str();
    frac.insert(frac.begin(), digits - static_cast<int>(frac.size()), '0');
    return (neg ? "-" : "") + ip.str() + "." + frac;
}

/** Thread budget: PATCHWORK_THREADS caps internal parallelism when set. */
inline unsigned thread_budget()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned def = std::min(4u, hw);
    if (const char* env = std::getenv("PATCHWORK_THREADS"))
    {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1)
            return std::min<unsigned>(static_cast<unsigned>(v), hw);
    }
    return def;
}

/** Chunked parallel loop; results must not depend on execution order. */
inline void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body)
{
    unsigned threads = thread_budget();
    if (threads <= 1 || count < 64)
    {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
    {
        std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool)
        th.join();
}

}  // namespace patchwork

#endif  // PATCHWORK_NUMERIC_HPP
