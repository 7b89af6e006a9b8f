#ifndef PHIPSI_COUNTEREXAMPLE_HPP
#define PHIPSI_COUNTEREXAMPLE_HPP

// The transfer matrix T(n, sigma) with vec(A) = T vec(B), its structural
// checks, and the end-to-end verification pipeline for one sigma.

#include "exactmath.hpp"
#include "permutations.hpp"
#include "polytopes.hpp"
#include "symbolic.hpp"

#include <chrono>
#include <cstddef>
#include <exception>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace phipsi {

/// T((i,k),(j,l)) = 1/n where B(j,l) and A(i,k) hold the same variable.
inline RatMatrix build_T(std::size_t n, const Permutation& sigma)
{
    const VarMatrix a = build_A(n), b = build_B(n, sigma);
    const TensorIndex t{n};
    const Rational entry = make_rational(1, static_cast<long>(n));
    RatMatrix out(t.dim(), t.dim());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l)
                    if (a(i, k) == b(j, l)) out(t.flat(i, k), t.flat(j, l)) = entry;
    return out;
}

/// Checks vec(A) = T vec(B) on the n basis substitutions x = e_m. Entries of
/// A and B are single variables, so this proves the identity for every x.
inline bool verify_transfer_identity(const RatMatrix& T, std::size_t n, const Permutation& sigma)
{
    require_square_tensor(T, n);
    const VarMatrix a = build_A(n), b = build_B(n, sigma);
    for (int m = 1; m <= static_cast<int>(n); ++m) {
        RatVector u(n * n), v(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (a(i, k) == m) u[i * n + k] = 1;
                if (b(i, k) == m) v[i * n + k] = 1;
            }
        if (T * v != u) return false;
    }
    return true;
}

struct BlockReport {
    bool ok = true;
    std::vector<std::string> failing;

    explicit operator bool() const noexcept { return ok; }
};

/// Every n x n slice of T obtained by fixing one row index component and one
/// column index component must be (1/n) times a permutation matrix. The four
/// slice families fix (i,j), (k,l), (i,l) or (k,j).
inline BlockReport block_structure_report(const RatMatrix& T, std::size_t n)
{
    require_square_tensor(T, n);
    const TensorIndex t{n};
    const Rational entry = make_rational(1, static_cast<long>(n));
    BlockReport rep;

    // slice(u, v) addresses entry (row u, col v) of the slice with fixed (x, y)
    auto check = [&](const char* family, std::size_t x, std::size_t y, auto&& at) {
        std::vector<int> row_hits(n, 0), col_hits(n, 0);
        bool good = true;
        for (std::size_t u = 0; u < n && good; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                const Rational& e = at(x, y, u, v);
                if (sgn(e) == 0) continue;
                if (e != entry) {
                    good = false;
                    break;
                }
                ++row_hits[u];
                ++col_hits[v];
            }
        for (std::size_t s = 0; s < n && good; ++s) good = row_hits[s] == 1 && col_hits[s] == 1;
        if (!good) {
            rep.ok = false;
            rep.failing.push_back(std::string(family) + "(" + std::to_string(x + 1) + "," + std::to_string(y + 1) + ")");
        }
    };

    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            check("fixed-ij", x, y, [&](auto i, auto j, auto k, auto l) -> const Rational& { return T(t.flat(i, k), t.flat(j, l)); });
            check("fixed-kl", x, y, [&](auto k, auto l, auto i, auto j) -> const Rational& { return T(t.flat(i, k), t.flat(j, l)); });
            check("fixed-il", x, y, [&](auto i, auto l, auto k, auto j) -> const Rational& { return T(t.flat(i, k), t.flat(j, l)); });
            check("fixed-kj", x, y, [&](auto k, auto j, auto i, auto l) -> const Rational& { return T(t.flat(i, k), t.flat(j, l)); });
        }
    return rep;
}

/// Reads B's variable pattern back out of T, given that A = build_A(n).
inline VarMatrix recover_B_pattern(const RatMatrix& T, std::size_t n)
{
    require_square_tensor(T, n);
    const TensorIndex t{n};
    const VarMatrix a = build_A(n);
    VarMatrix b(n);
    std::vector<bool> set(n * n, false);
    for (std::size_t row = 0; row < t.dim(); ++row)
        for (std::size_t col = 0; col < t.dim(); ++col) {
            if (sgn(T(row, col)) == 0) continue;
            auto [i, k] = t.split(row);
            auto [j, l] = t.split(col);
            if (set[col] && b(j, l) != a(i, k))
                throw std::invalid_argument("T maps two different variables onto cell " + t.name(row, col));
            b(j, l) = a(i, k);
            set[col] = true;
        }
    for (bool s : set)
        if (!s) throw std::invalid_argument("T has an empty column; not a transfer matrix");
    validate(b);
    return b;
}

/// True iff no kron(p, q) fits inside supp(T), checked by scanning all n!^2 pairs.
inline bool support_scan_not_in_psi(const RatMatrix& T, std::size_t n)
{
    require_square_tensor(T, n);
    for (const auto& v : kron_vertices(n))
        if (support_contained(v, T)) return false;
    return true;
}

/// Largest n at which certify_not_in_psi also runs the n!^2 support scan.
inline constexpr std::size_t support_scan_cap = 5;

/// True iff no vertex kron(p, q) is support-contained in T, which rules out
/// any convex decomposition of T over Psi's vertices. Decided by the pattern
/// search A = P B Q and cross-checked by the support scan for small n.
inline bool certify_not_in_psi(const RatMatrix& T, std::size_t n)
{
    const bool by_pattern = !exists_PQ(build_A(n), recover_B_pattern(T, n)).has_value();
    if (n <= support_scan_cap && support_scan_not_in_psi(T, n) != by_pattern)
        throw std::logic_error("pattern search and support scan disagree on support containment");
    return by_pattern;
}

enum class LpStatus { InfeasibleCertified, Feasible, Skipped, NotRun };

inline const char* to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::InfeasibleCertified: return "infeasible_certified";
    case LpStatus::Feasible: return "feasible";
    case LpStatus::Skipped: return "skipped";
    case LpStatus::NotRun: return "not_run";
    }
    return "?";
}

enum class StageStatus { Pass, Fail, Skipped, Error, NotRun };

inline const char* to_string(StageStatus s)
{
    switch (s) {
    case StageStatus::Pass: return "pass";
    case StageStatus::Fail: return "fail";
    case StageStatus::Skipped: return "skipped";
    case StageStatus::Error: return "error";
    case StageStatus::NotRun: return "not_run";
    }
    return "?";
}

struct StageResult {
    std::string name;
    StageStatus status = StageStatus::NotRun;
    std::string detail;
    double seconds = 0.0;
};

struct VerificationReport {
    std::size_t n = 0;
    Permutation sigma;
    bool lemma1_pass = false;
    bool lemma2_pass = false;
    bool transfer_identity_pass = false;
    bool block_structure_pass = false;
    bool in_phi = false;
    bool is_vertex = false;
    bool psi_certificate_pass = false;
    LpStatus psi_lp_status = LpStatus::NotRun;

    std::size_t support_size = 0;
    std::size_t support_rank = 0;
    std::size_t phi_rows = 0;
    std::size_t lp_columns = 0;
    bool lp_evidence_verified = false;
    std::optional<std::string> error;
    std::vector<std::string> notes;
    std::vector<StageResult> stages;

    /// Every stage passed and, when run, the LP certified infeasibility.
    bool all_pass() const
    {
        return !error && lemma1_pass && lemma2_pass && transfer_identity_pass && block_structure_pass && in_phi &&
               is_vertex && psi_certificate_pass &&
               (psi_lp_status == LpStatus::InfeasibleCertified || psi_lp_status == LpStatus::Skipped);
    }

    /// A result that contradicts the theorem or the internal consistency of
    /// the two non-membership routes.
    bool divergence() const
    {
        if (error) return true;
        if (!transfer_identity_pass || !block_structure_pass || !in_phi) return true;
        if (psi_certificate_pass && psi_lp_status == LpStatus::Feasible) return true;
        return lemma1_pass && !all_pass();
    }

    /// Name of the first stage that did not pass, or empty.
    std::string first_failure() const
    {
        for (const auto& s : stages)
            if (s.status == StageStatus::Fail || s.status == StageStatus::Error) return s.name;
        return {};
    }
};

struct VerifyOptions {
    /// Defaults to n <= full_mode_default_cap.
    std::optional<bool> run_lp;
    FamilyReading reading = FamilyReading::Standard;
};

/// Runs every stage for (n, sigma) and always returns a complete report. An
/// exception inside a stage marks that stage as error and the rest as not run.
inline VerificationReport full_verification(std::size_t n, const Permutation& sigma, const VerifyOptions& opts = {})
{
    if (sigma.size() != n)
        throw std::invalid_argument("sigma has size " + std::to_string(sigma.size()) + ", expected " + std::to_string(n));
    const bool run_lp = opts.run_lp.value_or(n <= full_mode_default_cap);

    VerificationReport rep;
    rep.n = n;
    rep.sigma = sigma;
    const char* names[] = {"lemma1",          "lemma2",        "build_T",   "transfer_identity", "block_structure",
                           "phi_membership",  "phi_vertex",    "psi_certificate", "psi_lp"};
    for (const char* s : names) rep.stages.push_back(StageResult{s, StageStatus::NotRun, {}, 0.0});

    RatMatrix T;
    ConstraintSystem sys;
    std::size_t idx = 0;
    auto stage = [&](auto&& body) {
        if (rep.error) return;
        auto& st = rep.stages[idx++];
        auto start = std::chrono::steady_clock::now();
        try {
            st.status = body(st) ? StageStatus::Pass : StageStatus::Fail;
        } catch (const std::exception& e) {
            st.status = StageStatus::Error;
            st.detail = e.what();
            rep.error = st.name + ": " + e.what();
        }
        st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    stage([&](StageResult&) { return rep.lemma1_pass = is_counterexample_sigma(sigma); });
    stage([&](StageResult& st) {
        auto found = exists_PQ(build_A(n), build_B(n, sigma));
        if (found) st.detail = "A = P B Q with p = [" + to_string(found->first) + "], q = [" + to_string(found->second) + "]";
        rep.lemma2_pass = !found.has_value();
        if (rep.lemma2_pass != rep.lemma1_pass) {
            // Also covers the opposite orientation of the conjugacy test.
            rep.notes.push_back("lemma2 verdict differs from the lemma1 filter for this sigma");
        }
        return rep.lemma2_pass;
    });
    stage([&](StageResult& st) {
        T = build_T(n, sigma);
        rep.support_size = support(T).size();
        st.detail = std::to_string(rep.support_size) + " nonzero entries";
        return rep.support_size == n * n * n;
    });
    stage([&](StageResult&) { return rep.transfer_identity_pass = verify_transfer_identity(T, n, sigma); });
    stage([&](StageResult& st) {
        auto b = block_structure_report(T, n);
        if (!b) st.detail = "first failing slice " + b.failing.front();
        return rep.block_structure_pass = b.ok;
    });
    stage([&](StageResult& st) {
        sys = build_phi_constraints(n, opts.reading);
        rep.phi_rows = sys.C.rows();
        auto check = phi_contains(T, sys);
        if (!check) st.detail = check.violations.front();
        return rep.in_phi = check.contained;
    });
    stage([&](StageResult& st) {
        if (!rep.in_phi) {
            st.detail = "not in Phi";
            return false;
        }
        auto supp = support(T);
        rep.support_rank = rat_rank(sys.C.select_columns(supp));
        rep.is_vertex = rep.support_rank == supp.size();
        st.detail = "support-column rank " + std::to_string(rep.support_rank) + " of " + std::to_string(supp.size()) +
                    " (" + std::to_string(sys.C.rows()) + " rows)";
        return rep.is_vertex;
    });
    stage([&](StageResult&) { return rep.psi_certificate_pass = certify_not_in_psi(T, n); });
    stage([&](StageResult& st) {
        if (!run_lp) {
            st.detail = "full LP not requested";
            rep.psi_lp_status = LpStatus::Skipped;
            st.status = StageStatus::Skipped;
            return true;
        }
        auto res = psi_contains(T, n, PsiMode::Full, true);
        rep.lp_columns = res.columns;
        rep.lp_evidence_verified = res.in_psi ? weights_reconstruct(res, T, n) : psi_farkas_valid(T, n, *res.farkas);
        rep.psi_lp_status = res.in_psi ? LpStatus::Feasible : LpStatus::InfeasibleCertified;
        st.detail = std::to_string(res.columns) + " columns, " + std::to_string(res.pivots) + " pivots";
        if (res.in_psi) st.detail += ", " + std::to_string(res.weights.size()) + " nonzero weights";
        return rep.lp_evidence_verified && !res.in_psi;
    });
    if (rep.stages.back().status == StageStatus::Pass && rep.psi_lp_status == LpStatus::Skipped)
        rep.stages.back().status = StageStatus::Skipped;
    return rep;
}

/// Number of pairwise distinct T over the given sigmas.
inline std::size_t count_distinct_T(std::size_t n, const std::vector<Permutation>& sigmas)
{
    std::set<std::vector<std::size_t>> seen;
    for (const auto& s : sigmas) seen.insert(support(build_T(n, s)));
    return seen.size();
}

} // namespace phipsi

#endif // PHIPSI_COUNTEREXAMPLE_HPP
