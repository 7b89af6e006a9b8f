#ifndef PHIPSI_SYMBOLIC_HPP
#define PHIPSI_SYMBOLIC_HPP

// Circulant matrices over the variables x_1..x_n, stored as index patterns.
// Every entry is a single variable, so equality of patterns is equality of
// the symbolic matrices.

#include "permutations.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phipsi {

class VarMatrix {
public:
    VarMatrix() = default;
    explicit VarMatrix(std::size_t n) : n_(n), cells_(n * n, 1) {}

    std::size_t size() const noexcept { return n_; }

    /// 1-based variable index held at 0-based cell (i, k).
    int& operator()(std::size_t i, std::size_t k) { return cells_[i * n_ + k]; }
    int operator()(std::size_t i, std::size_t k) const { return cells_[i * n_ + k]; }

    /// Each variable once per row and once per column.
    bool is_latin() const
    {
        for (std::size_t i = 0; i < n_; ++i) {
            std::vector<bool> row(n_ + 1, false), col(n_ + 1, false);
            for (std::size_t k = 0; k < n_; ++k) {
                int r = (*this)(i, k), c = (*this)(k, i);
                if (r < 1 || c < 1 || static_cast<std::size_t>(r) > n_ || static_cast<std::size_t>(c) > n_ ||
                    row[r] || col[c])
                    return false;
                row[r] = col[c] = true;
            }
        }
        return true;
    }

    friend bool operator==(const VarMatrix&, const VarMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<int> cells_;
};

inline void validate(const VarMatrix& m)
{
    if (!m.is_latin()) throw std::invalid_argument("variable matrix is not a Latin square over x_1..x_n");
}

/// A(i,k) = x_{((i+k-2) mod n)+1} in 1-based terms: row i is row 1 shifted left i-1 times.
inline VarMatrix build_A(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("build_A needs n >= 1");
    VarMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) a(i, k) = static_cast<int>((i + k) % n) + 1;
    validate(a);
    return a;
}

/// B(j,l) = x_{sigma(((j+l-2) mod n)+1)}.
inline VarMatrix build_B(std::size_t n, const Permutation& sigma)
{
    if (sigma.size() != n)
        throw std::invalid_argument("sigma has size " + std::to_string(sigma.size()) + ", expected " +
                                    std::to_string(n));
    VarMatrix b(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) b(j, l) = sigma((j + l) % n) + 1;
    validate(b);
    return b;
}

/// P B Q as a pattern: result(i,k) = B(p(i), q(k)).
inline VarMatrix apply_PQ(const VarMatrix& b, const Permutation& p, const Permutation& q)
{
    if (p.size() != b.size() || q.size() != b.size())
        throw std::invalid_argument("apply_PQ: permutation size does not match matrix");
    VarMatrix out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            out(i, k) = b(static_cast<std::size_t>(p(i)), static_cast<std::size_t>(q(k)));
    return out;
}

/// Lexicographically smallest (p, q) with apply_PQ(B, p, q) == A, if any.
///
/// Both matrices are Latin, so fixing p(1) forces q (row 1 of A must be a
/// rearrangement of row p(1) of B), and q then forces p through column q(1).
/// Trying p(1) = 1..n in order therefore covers all n!^2 pairs.
inline std::optional<std::pair<Permutation, Permutation>> exists_PQ(const VarMatrix& a, const VarMatrix& b)
{
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("exists_PQ: size mismatch");
    validate(a);
    validate(b);
    if (n == 0) return std::nullopt;

    for (std::size_t p0 = 0; p0 < n; ++p0) {
        // position of each variable in row p0 of B
        std::vector<int> where(n + 1);
        for (std::size_t l = 0; l < n; ++l) where[b(p0, l)] = static_cast<int>(l);
        std::vector<int> q(n);
        for (std::size_t k = 0; k < n; ++k) q[k] = where[a(0, k)];

        const auto q0 = static_cast<std::size_t>(q[0]);
        std::vector<int> in_col(n + 1);
        for (std::size_t r = 0; r < n; ++r) in_col[b(r, q0)] = static_cast<int>(r);
        std::vector<int> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = in_col[a(i, 0)];

        Permutation pp(p), qq(q);
        if (apply_PQ(b, pp, qq) == a) return std::make_pair(std::move(pp), std::move(qq));
    }
    return std::nullopt;
}

// VarMatrix text format: n, then n lines of n variable indices.

inline void write_var_matrix(std::ostream& os, const VarMatrix& m)
{
    os << m.size() << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t k = 0; k < m.size(); ++k) os << (k ? " " : "") << m(i, k);
        os << '\n';
    }
}

inline VarMatrix read_var_matrix(std::istream& is)
{
    long long n = -1;
    if (!(is >> n) || n < 0) throw std::invalid_argument("variable matrix header must be n");
    VarMatrix m(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t k = 0; k < m.size(); ++k)
            if (!(is >> m(i, k))) throw std::invalid_argument("variable matrix ended early");
    return m;
}

inline std::string var_matrix_to_string(const VarMatrix& m)
{
    std::ostringstream os;
    write_var_matrix(os, m);
    return os.str();
}

} // namespace phipsi

#endif // PHIPSI_SYMBOLIC_HPP
