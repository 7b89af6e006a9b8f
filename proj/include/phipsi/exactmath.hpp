#ifndef PHIPSI_EXACTMATH_HPP
#define PHIPSI_EXACTMATH_HPP

// Exact rational scalars and dense matrices, fraction-free rank, and an exact
// Phase I simplex that decides feasibility of {x >= 0 : C x = d} and returns
// either a witness or a Farkas certificate.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phipsi {

/// Arbitrary-precision rational, kept canonical (gcd 1, positive denominator).
using Rational = mpq_class;
using RatVector = std::vector<Rational>;

inline Rational make_rational(long num, long den = 1)
{
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r)
{
    return r.get_str();
}

inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    auto bad = [&] { return std::invalid_argument("malformed rational '" + s + "'"); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    auto digits_ok = [](std::string_view part, bool allow_sign) {
        if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+'))
            part.remove_prefix(1);
        return !part.empty() &&
               std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw bad();
    Rational r(n, d);
    r.canonicalize();
    return r;
}

class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMatrix identity(std::size_t n)
    {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static RatMatrix from_rows(const std::vector<std::vector<Rational>>& rows)
    {
        std::size_t cols = rows.empty() ? 0 : rows.front().size();
        RatMatrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw std::invalid_argument("ragged rows");
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Rational>& data() const noexcept { return data_; }

    RatMatrix transpose() const
    {
        RatMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    RatMatrix select_columns(const std::vector<std::size_t>& cols) const
    {
        RatMatrix s(rows_, cols.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols.size(); ++c) s(r, c) = (*this)(r, cols.at(c));
        return s;
    }

    RatVector operator*(const RatVector& x) const
    {
        if (x.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
        RatVector y(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) {
                const Rational& a = (*this)(r, c);
                if (sgn(a) != 0 && sgn(x[c]) != 0) y[r] += a * x[c];
            }
        return y;
    }

    RatMatrix operator*(const RatMatrix& o) const
    {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
        RatMatrix p(rows_, o.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& a = (*this)(r, k);
                if (sgn(a) == 0) continue;
                for (std::size_t c = 0; c < o.cols_; ++c)
                    if (sgn(o(k, c)) != 0) p(r, c) += a * o(k, c);
            }
        return p;
    }

    friend bool operator==(const RatMatrix& a, const RatMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// Matrix text format: "rows cols", then one row per line.

inline void write_matrix(std::ostream& os, const RatMatrix& m)
{
    os << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << ' ';
            os << to_string(m(r, c));
        }
        os << '\n';
    }
}

inline std::string matrix_to_string(const RatMatrix& m)
{
    std::ostringstream os;
    write_matrix(os, m);
    return os.str();
}

inline RatMatrix read_matrix(std::istream& is)
{
    long long rows = -1, cols = -1;
    if (!(is >> rows >> cols) || rows < 0 || cols < 0)
        throw std::invalid_argument("matrix header must be 'rows cols'");
    RatMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    std::string tok;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!(is >> tok))
                throw std::invalid_argument("matrix ended early at row " + std::to_string(r + 1));
            m(r, c) = parse_rational(tok);
        }
    if (is >> tok) throw std::invalid_argument("trailing data after matrix: '" + tok + "'");
    return m;
}

inline RatMatrix parse_matrix(const std::string& text)
{
    std::istringstream is(text);
    return read_matrix(is);
}

namespace detail {

inline mpz_class lcm_of_denominators(const RatMatrix& m, std::size_t r)
{
    mpz_class l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    return l;
}

} // namespace detail

/// Rank over Q by Bareiss elimination on the integer matrix obtained by
/// clearing denominators row by row. Every division is exact.
inline std::size_t rat_rank(const RatMatrix& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0;

    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        mpz_class scale = detail::lcm_of_denominators(m, r);
        for (std::size_t c = 0; c < cols; ++c) {
            mpz_class v = m(r, c).get_num() * scale;
            mpz_divexact(a[r][c].get_mpz_t(), v.get_mpz_t(), m(r, c).get_den_mpz_t());
        }
    }

    mpz_class prev = 1, t;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[rank]);
        const mpz_class& p = a[rank][c];
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (a[r][c] == 0) {
                // (p * a[r][j] - 0) / prev
                for (std::size_t j = c + 1; j < cols; ++j) {
                    if (a[r][j] == 0) continue;
                    t = p * a[r][j];
                    mpz_divexact(a[r][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                }
                continue;
            }
            for (std::size_t j = c + 1; j < cols; ++j) {
                t = p * a[r][j] - a[r][c] * a[rank][j];
                mpz_divexact(a[r][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[r][c] = 0;
        }
        prev = p;
        ++rank;
    }
    return rank;
}

/// Throws on duplicate or out-of-range column indices (0-based).
inline bool columns_independent(const RatMatrix& m, const std::vector<std::size_t>& cols)
{
    std::set<std::size_t> seen;
    for (auto c : cols) {
        if (c >= m.cols()) throw std::out_of_range("column index " + std::to_string(c) + " out of range");
        if (!seen.insert(c).second) throw std::invalid_argument("duplicate column index " + std::to_string(c));
    }
    if (cols.empty()) return true;
    if (cols.size() > m.rows()) return false;
    return rat_rank(m.select_columns(cols)) == cols.size();
}

struct Feasibility {
    enum class Status { Feasible, Infeasible };
    Status status = Status::Infeasible;
    std::optional<RatVector> witness;
    std::optional<RatVector> farkas;
    std::size_t pivots = 0;

    bool feasible() const noexcept { return status == Status::Feasible; }
};

/// C^T y >= 0 componentwise and d^T y < 0.
inline bool check_farkas(const RatMatrix& c, const RatVector& d, const RatVector& y)
{
    if (d.size() != c.rows() || y.size() != c.rows())
        throw std::invalid_argument("check_farkas: dimension mismatch");
    Rational dy;
    for (std::size_t r = 0; r < d.size(); ++r) dy += d[r] * y[r];
    if (sgn(dy) >= 0) return false;
    for (std::size_t col = 0; col < c.cols(); ++col) {
        Rational s;
        for (std::size_t r = 0; r < c.rows(); ++r)
            if (sgn(y[r]) != 0 && sgn(c(r, col)) != 0) s += c(r, col) * y[r];
        if (sgn(s) < 0) return false;
    }
    return true;
}

/// x >= 0 and C x = d exactly.
inline bool check_witness(const RatMatrix& c, const RatVector& d, const RatVector& x)
{
    if (d.size() != c.rows() || x.size() != c.cols())
        throw std::invalid_argument("check_witness: dimension mismatch");
    if (std::any_of(x.begin(), x.end(), [](const Rational& v) { return sgn(v) < 0; })) return false;
    return c * x == d;
}

/// Decides whether {x >= 0 : C x = d} is nonempty.
///
/// Phase I simplex on a dense exact tableau with one artificial per row and
/// Bland's least-index rule for both the entering and leaving choice, which
/// guarantees termination on degenerate systems. At the Phase I optimum the
/// simplex multipliers y satisfy C'^T y <= 0 and d'^T y = (artificial sum),
/// so a positive optimum yields the certificate -y (with row sign flips
/// undone). Both outputs are re-verified before returning.
inline Feasibility lp_feasible(const RatMatrix& c, const RatVector& d)
{
    if (d.size() != c.rows()) throw std::invalid_argument("lp_feasible: C has " + std::to_string(c.rows()) +
                                                          " rows but d has " + std::to_string(d.size()));
    const std::size_t m = c.rows(), n = c.cols(), width = n + m;

    std::vector<int> sign(m, 1);
    std::vector<RatVector> tab(m, RatVector(width));
    RatVector rhs(m);
    for (std::size_t r = 0; r < m; ++r) {
        sign[r] = sgn(d[r]) < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j)
            if (sgn(c(r, j)) != 0) tab[r][j] = sign[r] < 0 ? Rational(-c(r, j)) : c(r, j);
        tab[r][n + r] = 1;
        rhs[r] = sign[r] < 0 ? Rational(-d[r]) : d[r];
    }

    // Reduced costs for cost vector (0 on x, 1 on artificials).
    RatVector cost(width);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < n; ++j)
            if (sgn(tab[r][j]) != 0) cost[j] -= tab[r][j];

    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

    Feasibility out;
    std::vector<std::size_t> nz;
    Rational f, ratio, best;
    for (;;) {
        std::size_t enter = width;
        for (std::size_t j = 0; j < width; ++j)
            if (sgn(cost[j]) < 0) {
                enter = j;
                break;
            }
        if (enter == width) break;

        std::size_t leave = m;
        for (std::size_t r = 0; r < m; ++r) {
            if (sgn(tab[r][enter]) <= 0) continue;
            ratio = rhs[r] / tab[r][enter];
            if (leave == m || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                leave = r;
                best = ratio;
            }
        }
        // Phase I objective is bounded below by 0.
        if (leave == m) throw std::logic_error("lp_feasible: unbounded Phase I direction");

        RatVector& prow = tab[leave];
        Rational pivot = prow[enter];
        nz.clear();
        for (std::size_t j = 0; j < width; ++j)
            if (sgn(prow[j]) != 0) {
                prow[j] /= pivot;
                nz.push_back(j);
            }
        rhs[leave] /= pivot;

        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || sgn(tab[r][enter]) == 0) continue;
            f = tab[r][enter];
            for (auto j : nz) tab[r][j] -= f * prow[j];
            rhs[r] -= f * rhs[leave];
        }
        f = cost[enter];
        for (auto j : nz) cost[j] -= f * prow[j];
        basis[leave] = enter;
        ++out.pivots;
    }

    Rational objective;
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] >= n) objective += rhs[r];
    if (sgn(objective) == 0) {
        RatVector x(n);
        for (std::size_t r = 0; r < m; ++r)
            if (basis[r] < n) x[basis[r]] = rhs[r];
        if (!check_witness(c, d, x)) throw std::logic_error("lp_feasible: witness failed re-substitution");
        out.status = Feasibility::Status::Feasible;
        out.witness = std::move(x);
    } else {
        // Artificial reduced cost is 1 - y_r.
        RatVector y(m);
        for (std::size_t r = 0; r < m; ++r) {
            Rational yr = 1 - cost[n + r];
            y[r] = sign[r] < 0 ? yr : Rational(-yr);
        }
        if (!check_farkas(c, d, y)) throw std::logic_error("lp_feasible: Farkas vector failed verification");
        out.status = Feasibility::Status::Infeasible;
        out.farkas = std::move(y);
    }
    return out;
}

} // namespace phipsi

#endif // PHIPSI_EXACTMATH_HPP
