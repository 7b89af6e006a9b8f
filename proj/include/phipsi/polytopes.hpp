#ifndef PHIPSI_POLYTOPES_HPP
#define PHIPSI_POLYTOPES_HPP

// The balance-equation polytope Phi_{n,n} as an equality system over the n^4
// entries c_{(i,k),(j,l)} (with implicit nonnegativity), and membership in the
// tensor polytope Psi_{n,n} = conv{P (x) Q} decided by exact LP.

#include "exactmath.hpp"
#include "permutations.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phipsi {

/// Row-major pairing (i,k) -> n*i + k, 0-based. Shared by rows and columns of
/// every n^2 x n^2 matrix in the project.
struct TensorIndex {
    std::size_t n;

    std::size_t flat(std::size_t i, std::size_t k) const noexcept { return n * i + k; }
    std::pair<std::size_t, std::size_t> split(std::size_t idx) const noexcept { return {idx / n, idx % n}; }
    std::size_t dim() const noexcept { return n * n; }

    /// Position of c_{(i,k),(j,l)} in the row-major vectorization of c.
    std::size_t var(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const noexcept
    {
        return flat(i, k) * dim() + flat(j, l);
    }

    /// "((i,k),(j,l))" with 1-based indices.
    std::string name(std::size_t row, std::size_t col) const
    {
        auto [i, k] = split(row);
        auto [j, l] = split(col);
        return "((" + std::to_string(i + 1) + "," + std::to_string(k + 1) + "),(" + std::to_string(j + 1) + "," +
               std::to_string(l + 1) + "))";
    }
};

/// Index ranges for the third and fourth balance families. Standard takes
/// k = 2..n with i, j free (mirroring families one and two). Literal reads the
/// printed where-clause as i = 2..n with k, j free.
enum class FamilyReading { Standard, Literal };

struct ConstraintSystem {
    std::size_t n = 0;
    FamilyReading reading = FamilyReading::Standard;
    RatMatrix C;
    RatVector d;
    std::vector<std::string> labels;

    std::size_t variables() const noexcept { return C.cols(); }
};

enum class BalanceFamily { One = 1, Two = 2, Three = 3, Four = 4 };

/// Coefficients of one balance row; zero-based indices (a, b, c) are
/// (i, k, l) for families one and two and (k, i, j) for three and four.
///   1: sum_j c_{(i,k),(j,l)} - sum_j c_{(1,k),(j,l)}
///   2: sum_j c_{(j,k),(i,l)} - sum_j c_{(1,k),(j,l)}
///   3: sum_l c_{(i,k),(j,l)} - sum_l c_{(i,1),(j,l)}
///   4: sum_l c_{(i,l),(j,k)} - sum_l c_{(i,1),(j,l)}
inline RatVector balance_row(std::size_t n, BalanceFamily family, std::size_t a, std::size_t b, std::size_t c)
{
    const TensorIndex t{n};
    RatVector row(n * n * n * n);
    for (std::size_t s = 0; s < n; ++s) {
        switch (family) {
        case BalanceFamily::One:
            row[t.var(a, b, s, c)] += 1;
            row[t.var(0, b, s, c)] -= 1;
            break;
        case BalanceFamily::Two:
            row[t.var(s, b, a, c)] += 1;
            row[t.var(0, b, s, c)] -= 1;
            break;
        case BalanceFamily::Three:
            row[t.var(b, a, c, s)] += 1;
            row[t.var(b, 0, c, s)] -= 1;
            break;
        case BalanceFamily::Four:
            row[t.var(b, s, c, a)] += 1;
            row[t.var(b, 0, c, s)] -= 1;
            break;
        }
    }
    return row;
}

namespace detail {

inline std::string idx_label(const char* family, const char* names, std::size_t a, std::size_t b, std::size_t c)
{
    std::ostringstream os;
    os << family << '(' << names[0] << '=' << a + 1 << ',' << names[1] << '=' << b + 1 << ',' << names[2] << '='
       << c + 1 << ')';
    return os.str();
}

} // namespace detail

/// Global row/column sums (2n^2 rows) followed by the four balance families.
/// Under the Standard reading there are (n-1)n^2 rows per family.
inline ConstraintSystem build_phi_constraints(std::size_t n, FamilyReading reading = FamilyReading::Standard)
{
    if (n == 0) throw std::invalid_argument("build_phi_constraints needs n >= 1");
    const TensorIndex t{n};
    const std::size_t vars = n * n * n * n;
    std::vector<RatVector> rows;
    ConstraintSystem sys;
    sys.n = n;
    sys.reading = reading;

    auto push = [&](RatVector row, Rational rhs, std::string label) {
        rows.push_back(std::move(row));
        sys.d.push_back(std::move(rhs));
        sys.labels.push_back(std::move(label));
    };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            RatVector out(vars), in(vars);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l) {
                    out[t.var(i, k, j, l)] = 1;
                    in[t.var(j, l, i, k)] = 1;
                }
            auto at = "(i=" + std::to_string(i + 1) + ",k=" + std::to_string(k + 1) + ")";
            push(std::move(out), 1, "row-sum" + at);
            push(std::move(in), 1, "col-sum" + at);
        }

    for (auto fam : {BalanceFamily::One, BalanceFamily::Two})
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    push(balance_row(n, fam, i, k, l), 0,
                         detail::idx_label(fam == BalanceFamily::One ? "family1" : "family2", "ikl", i, k, l));

    for (auto fam : {BalanceFamily::Three, BalanceFamily::Four}) {
        const char* name = fam == BalanceFamily::Three ? "family3" : "family4";
        if (reading == FamilyReading::Standard) {
            for (std::size_t k = 1; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) push(balance_row(n, fam, k, i, j), 0, detail::idx_label(name, "kij", k, i, j));
        } else {
            for (std::size_t i = 1; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t j = 0; j < n; ++j) {
                        auto row = balance_row(n, fam, k, i, j);
                        // family 3 at k = 1 is the empty equation 0 = 0
                        if (std::all_of(row.begin(), row.end(), [](const Rational& v) { return sgn(v) == 0; }))
                            continue;
                        push(std::move(row), 0, detail::idx_label(name, "ikj", i, k, j));
                    }
        }
    }

    sys.C = RatMatrix::from_rows(rows);
    return sys;
}

inline void require_square_tensor(const RatMatrix& c, std::size_t n)
{
    if (c.rows() != n * n || c.cols() != n * n)
        throw std::invalid_argument("expected a " + std::to_string(n * n) + "x" + std::to_string(n * n) +
                                    " matrix, got " + std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
}

/// Row-major vectorization of an n^2 x n^2 matrix.
inline RatVector vectorize(const RatMatrix& c)
{
    return c.data();
}

struct PhiCheck {
    bool contained = false;
    /// Violated rows ("label: residual r") and negative entries.
    std::vector<std::string> violations;

    explicit operator bool() const noexcept { return contained; }
};

inline PhiCheck phi_contains(const RatMatrix& c, const ConstraintSystem& sys)
{
    require_square_tensor(c, sys.n);
    const TensorIndex t{sys.n};
    PhiCheck out;
    for (std::size_t r = 0; r < c.rows(); ++r)
        for (std::size_t col = 0; col < c.cols(); ++col)
            if (sgn(c(r, col)) < 0) out.violations.push_back("nonnegativity" + t.name(r, col) + ": " + to_string(c(r, col)));

    const auto& x = c.data();
    for (std::size_t r = 0; r < sys.C.rows(); ++r) {
        Rational lhs;
        for (std::size_t v = 0; v < sys.C.cols(); ++v)
            if (sgn(sys.C(r, v)) != 0 && sgn(x[v]) != 0) lhs += sys.C(r, v) * x[v];
        Rational residual = lhs - sys.d[r];
        if (sgn(residual) != 0) out.violations.push_back(sys.labels[r] + ": residual " + to_string(residual));
    }
    out.contained = out.violations.empty();
    return out;
}

/// Indices of nonzero entries in the row-major vectorization.
inline std::vector<std::size_t> support(const RatMatrix& c)
{
    std::vector<std::size_t> s;
    for (std::size_t v = 0; v < c.data().size(); ++v)
        if (sgn(c.data()[v]) != 0) s.push_back(v);
    return s;
}

/// A feasible point of {x >= 0 : Cx = d} is a vertex iff the columns of C on
/// its support are linearly independent.
inline bool is_vertex_of_phi(const RatMatrix& c, const ConstraintSystem& sys)
{
    auto check = phi_contains(c, sys);
    if (!check) throw std::invalid_argument("vertex test on a point outside Phi: " + check.violations.front());
    return columns_independent(sys.C, support(c));
}

/// Permutation matrix: row i has its 1 in column p(i).
inline RatMatrix permutation_matrix(const Permutation& p)
{
    RatMatrix m(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m(i, static_cast<std::size_t>(p(i))) = 1;
    return m;
}

/// Kronecker product of arbitrary n x n matrices under the shared pairing.
inline RatMatrix kron(const RatMatrix& a, const RatMatrix& b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("kron: factors must be square of equal size");
    const TensorIndex t{a.rows()};
    RatMatrix out(t.dim(), t.dim());
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.n; ++j) {
            if (sgn(a(i, j)) == 0) continue;
            for (std::size_t k = 0; k < t.n; ++k)
                for (std::size_t l = 0; l < t.n; ++l)
                    if (sgn(b(k, l)) != 0) out(t.flat(i, k), t.flat(j, l)) = a(i, j) * b(k, l);
        }
    return out;
}

/// Entry ((i,k),(j,l)) is 1 iff j = p(i) and l = q(k).
inline RatMatrix kron(const Permutation& p, const Permutation& q)
{
    require_same_size(p, q);
    const TensorIndex t{p.size()};
    RatMatrix out(t.dim(), t.dim());
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t k = 0; k < t.n; ++k)
            out(t.flat(i, k), t.flat(static_cast<std::size_t>(p(i)), static_cast<std::size_t>(q(k)))) = 1;
    return out;
}

struct KroneckerVertex {
    Permutation p;
    Permutation q;

    auto operator<=>(const KroneckerVertex&) const = default;
};

/// All n!^2 pairs, p-major, each factor in lexicographic order.
inline std::vector<KroneckerVertex> kron_vertices(std::size_t n)
{
    auto perms = all_permutations(n);
    std::vector<KroneckerVertex> out;
    out.reserve(perms.size() * perms.size());
    for (const auto& p : perms)
        for (const auto& q : perms) out.push_back({p, q});
    return out;
}

/// Vectorized positions of the n^2 ones of kron(p, q).
inline std::vector<std::size_t> kron_support(const KroneckerVertex& v)
{
    const TensorIndex t{v.p.size()};
    std::vector<std::size_t> s;
    s.reserve(t.dim());
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t k = 0; k < t.n; ++k)
            s.push_back(t.var(i, k, static_cast<std::size_t>(v.p(i)), static_cast<std::size_t>(v.q(k))));
    return s;
}

/// True iff kron(p, q) has no 1 where c is 0.
inline bool support_contained(const KroneckerVertex& v, const RatMatrix& c)
{
    for (auto idx : kron_support(v))
        if (sgn(c.data()[idx]) == 0) return false;
    return true;
}

enum class PsiMode { SupportFiltered, Full };

/// Largest n for which Full mode runs without an explicit override.
inline constexpr std::size_t full_mode_default_cap = 4;

struct MembershipResult {
    bool in_psi = false;
    /// Nonzero weights, in vertex order.
    std::vector<std::pair<KroneckerVertex, Rational>> weights;
    /// Certificate against the full Psi system: one entry per vectorized
    /// matrix entry, then one for the weight-sum row.
    std::optional<RatVector> farkas;
    /// LP columns actually offered to the solver.
    std::size_t columns = 0;
    std::size_t pivots = 0;
};

/// Columns are kron_vertices(n); rows are the n^4 entries then sum w = 1.
inline std::pair<RatMatrix, RatVector> psi_system(const RatMatrix& c, std::size_t n)
{
    require_square_tensor(c, n);
    auto verts = kron_vertices(n);
    const std::size_t entries = c.data().size();
    RatMatrix sys(entries + 1, verts.size());
    for (std::size_t col = 0; col < verts.size(); ++col) {
        for (auto idx : kron_support(verts[col])) sys(idx, col) = 1;
        sys(entries, col) = 1;
    }
    RatVector d = vectorize(c);
    d.push_back(1);
    return {std::move(sys), std::move(d)};
}

/// check_farkas against the full Psi system without materializing it.
inline bool psi_farkas_valid(const RatMatrix& c, std::size_t n, const RatVector& y)
{
    require_square_tensor(c, n);
    const std::size_t entries = c.data().size();
    if (y.size() != entries + 1) throw std::invalid_argument("psi_farkas_valid: certificate length mismatch");
    Rational dy = y[entries];
    for (std::size_t v = 0; v < entries; ++v)
        if (sgn(c.data()[v]) != 0) dy += c.data()[v] * y[v];
    if (sgn(dy) >= 0) return false;
    for (const auto& vert : kron_vertices(n)) {
        Rational s = y[entries];
        for (auto idx : kron_support(vert)) s += y[idx];
        if (sgn(s) < 0) return false;
    }
    return true;
}

inline RatMatrix reconstruct(const std::vector<std::pair<KroneckerVertex, Rational>>& weights, std::size_t n)
{
    const TensorIndex t{n};
    RatMatrix out(t.dim(), t.dim());
    for (const auto& [v, w] : weights)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                out(t.flat(i, k), t.flat(static_cast<std::size_t>(v.p(i)), static_cast<std::size_t>(v.q(k)))) += w;
    return out;
}

/// Weights nonnegative, summing to 1, reconstructing c exactly.
inline bool weights_reconstruct(const MembershipResult& r, const RatMatrix& c, std::size_t n)
{
    Rational total;
    for (const auto& [v, w] : r.weights) {
        if (sgn(w) < 0) return false;
        total += w;
    }
    return total == 1 && reconstruct(r.weights, n) == c;
}

/// Decides c in conv{kron(p, q)}.
///
/// SupportFiltered drops every vertex with a 1 outside supp(c) (nonnegativity
/// forces its weight to 0) and every row of a zero entry (it reads 0 = 0 on
/// the remaining columns). A certificate from the reduced LP is lifted to the
/// full system by a large enough multiplier on the zero entries; with no
/// admissible vertex the certificate is the zero-entry indicator minus the
/// weight-sum row. Full offers all n!^2 vertices and needs allow_large for
/// n > full_mode_default_cap.
inline MembershipResult psi_contains(const RatMatrix& c, std::size_t n, PsiMode mode, bool allow_large = false)
{
    require_square_tensor(c, n);
    for (const auto& v : c.data())
        if (sgn(v) < 0) throw std::invalid_argument("psi_contains: matrix has a negative entry");

    MembershipResult out;
    const std::size_t entries = c.data().size();
    auto verts = kron_vertices(n);

    if (mode == PsiMode::Full) {
        if (n > full_mode_default_cap && !allow_large)
            throw std::out_of_range("full Psi LP at n = " + std::to_string(n) + " needs an explicit override");
        auto [sys, d] = psi_system(c, n);
        out.columns = verts.size();
        auto fz = lp_feasible(sys, d);
        out.pivots = fz.pivots;
        if (fz.feasible()) {
            out.in_psi = true;
            for (std::size_t col = 0; col < verts.size(); ++col)
                if (sgn((*fz.witness)[col]) != 0) out.weights.emplace_back(verts[col], (*fz.witness)[col]);
        } else {
            out.farkas = std::move(fz.farkas);
        }
    } else {
        std::vector<std::size_t> admissible;
        for (std::size_t col = 0; col < verts.size(); ++col)
            if (support_contained(verts[col], c)) admissible.push_back(col);
        out.columns = admissible.size();
        auto supp = support(c);

        if (admissible.empty()) {
            RatVector y(entries + 1);
            for (std::size_t v = 0; v < entries; ++v)
                if (sgn(c.data()[v]) == 0) y[v] = 1;
            y[entries] = -1;
            out.farkas = std::move(y);
        } else {
            std::vector<std::size_t> row_of(entries, entries);
            for (std::size_t r = 0; r < supp.size(); ++r) row_of[supp[r]] = r;
            RatMatrix sys(supp.size() + 1, admissible.size());
            for (std::size_t col = 0; col < admissible.size(); ++col) {
                for (auto idx : kron_support(verts[admissible[col]])) sys(row_of[idx], col) = 1;
                sys(supp.size(), col) = 1;
            }
            RatVector d;
            for (auto idx : supp) d.push_back(c.data()[idx]);
            d.push_back(1);

            auto fz = lp_feasible(sys, d);
            out.pivots = fz.pivots;
            if (fz.feasible()) {
                out.in_psi = true;
                for (std::size_t col = 0; col < admissible.size(); ++col)
                    if (sgn((*fz.witness)[col]) != 0) out.weights.emplace_back(verts[admissible[col]], (*fz.witness)[col]);
            } else {
                const RatVector& yr = *fz.farkas;
                RatVector y(entries + 1);
                for (std::size_t r = 0; r < supp.size(); ++r) y[supp[r]] = yr[r];
                y[entries] = yr[supp.size()];
                // Every dropped vertex hits at least one zero entry.
                Rational lift = 0;
                for (const auto& v : verts) {
                    if (support_contained(v, c)) continue;
                    Rational s = y[entries];
                    for (auto idx : kron_support(v)) s += y[idx];
                    if (-s > lift) lift = -s;
                }
                for (std::size_t v = 0; v < entries; ++v)
                    if (sgn(c.data()[v]) == 0) y[v] = lift;
                out.farkas = std::move(y);
            }
        }
    }

    if (out.in_psi ? !weights_reconstruct(out, c, n) : !psi_farkas_valid(c, n, *out.farkas))
        throw std::logic_error("psi_contains: produced evidence failed re-verification");
    return out;
}

struct Marginals {
    RatMatrix alpha;
    RatMatrix beta;
};

/// alpha(i,j) = sum_l c_{(i,1),(j,l)}, beta(k,l) = sum_j c_{(1,k),(j,l)}.
inline Marginals induced_marginals(const RatMatrix& c, const ConstraintSystem& sys)
{
    auto check = phi_contains(c, sys);
    if (!check) throw std::invalid_argument("induced_marginals: input is not in Phi (" + check.violations.front() + ")");
    const std::size_t n = sys.n;
    const TensorIndex t{n};
    Marginals m{RatMatrix(n, n), RatMatrix(n, n)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t s = 0; s < n; ++s) {
                m.alpha(a, b) += c(t.flat(a, 0), t.flat(b, s));
                m.beta(a, b) += c(t.flat(0, a), t.flat(s, b));
            }
    return m;
}

inline bool is_doubly_stochastic(const RatMatrix& m)
{
    if (m.rows() != m.cols()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Rational r, c;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (sgn(m(i, j)) < 0) return false;
            r += m(i, j);
            c += m(j, i);
        }
        if (r != 1 || c != 1) return false;
    }
    return true;
}

inline std::string var_name(std::size_t n, std::size_t v)
{
    const TensorIndex t{n};
    return "c" + t.name(v / t.dim(), v % t.dim());
}

/// "label : coeff*var ... = rhs", one row per line.
inline void write_constraints_text(std::ostream& os, const ConstraintSystem& sys)
{
    for (std::size_t r = 0; r < sys.C.rows(); ++r) {
        os << sys.labels[r] << " :";
        for (std::size_t v = 0; v < sys.C.cols(); ++v)
            if (sgn(sys.C(r, v)) != 0) os << ' ' << to_string(sys.C(r, v)) << '*' << var_name(sys.n, v);
        os << " = " << to_string(sys.d[r]) << '\n';
    }
}

/// Augmented [C | d] in the matrix text format.
inline RatMatrix augmented(const ConstraintSystem& sys)
{
    RatMatrix m(sys.C.rows(), sys.C.cols() + 1);
    for (std::size_t r = 0; r < sys.C.rows(); ++r) {
        for (std::size_t v = 0; v < sys.C.cols(); ++v) m(r, v) = sys.C(r, v);
        m(r, sys.C.cols()) = sys.d[r];
    }
    return m;
}

inline void write_labels(std::ostream& os, const ConstraintSystem& sys)
{
    for (const auto& l : sys.labels) os << l << '\n';
}

} // namespace phipsi

#endif // PHIPSI_POLYTOPES_HPP
