#ifndef PHIPSI_PERMUTATIONS_HPP
#define PHIPSI_PERMUTATIONS_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <future>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phipsi {

/// Bijection on {1..n}. Stored 0-based: image()[i] is pi(i+1)-1.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> zero_based_image) : image_(std::move(zero_based_image))
    {
        std::vector<bool> seen(image_.size(), false);
        for (int v : image_) {
            if (v < 0 || static_cast<std::size_t>(v) >= image_.size() || seen[v])
                throw std::invalid_argument("image is not a bijection of {1.." + std::to_string(image_.size()) + "}");
            seen[v] = true;
        }
    }

    static Permutation identity(std::size_t n)
    {
        std::vector<int> img(n);
        std::iota(img.begin(), img.end(), 0);
        return Permutation(std::move(img));
    }

    /// From 1-based values, as written in one-line notation.
    static Permutation from_one_based(const std::vector<int>& image)
    {
        std::vector<int> img(image.size());
        std::transform(image.begin(), image.end(), img.begin(), [](int v) { return v - 1; });
        return Permutation(std::move(img));
    }

    std::size_t size() const noexcept { return image_.size(); }
    int operator()(std::size_t i) const { return image_[i]; }
    const std::vector<int>& image() const noexcept { return image_; }

    std::vector<int> one_based() const
    {
        std::vector<int> out(image_.size());
        std::transform(image_.begin(), image_.end(), out.begin(), [](int v) { return v + 1; });
        return out;
    }

    bool is_identity() const
    {
        for (std::size_t i = 0; i < image_.size(); ++i)
            if (image_[i] != static_cast<int>(i)) return false;
        return true;
    }

    /// Lengths of all cycles, fixed points included.
    std::vector<std::size_t> cycle_type() const
    {
        std::vector<bool> seen(size(), false);
        std::vector<std::size_t> lens;
        for (std::size_t s = 0; s < size(); ++s) {
            if (seen[s]) continue;
            std::size_t len = 0;
            for (std::size_t i = s; !seen[i]; i = static_cast<std::size_t>(image_[i])) {
                seen[i] = true;
                ++len;
            }
            lens.push_back(len);
        }
        return lens;
    }

    bool is_full_cycle() const { return size() > 0 && cycle_type().size() == 1; }

    auto operator<=>(const Permutation&) const = default;

private:
    std::vector<int> image_;
};

inline void require_same_size(const Permutation& a, const Permutation& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("permutation size mismatch: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
}

/// rho(i) = i+1 for i < n, rho(n) = 1.
inline Permutation cyclic(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("cyclic permutation needs n >= 1");
    std::vector<int> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<int>((i + 1) % n);
    return Permutation(std::move(img));
}

/// (a o b)(i) = a(b(i)).
inline Permutation compose(const Permutation& a, const Permutation& b)
{
    require_same_size(a, b);
    std::vector<int> img(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) img[i] = a(static_cast<std::size_t>(b(i)));
    return Permutation(std::move(img));
}

inline Permutation inverse(const Permutation& a)
{
    std::vector<int> img(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) img[static_cast<std::size_t>(a(i))] = static_cast<int>(i);
    return Permutation(std::move(img));
}

/// s r s^-1.
inline Permutation conjugate(const Permutation& s, const Permutation& r)
{
    return compose(compose(s, r), inverse(s));
}

inline Permutation power(const Permutation& a, std::size_t k)
{
    Permutation out = Permutation::identity(a.size());
    for (std::size_t i = 0; i < k; ++i) out = compose(a, out);
    return out;
}

/// The exponent i in {0..n-1} with pi = rho^i, if any.
inline std::optional<std::size_t> power_of_cyclic(const Permutation& pi)
{
    const std::size_t n = pi.size();
    if (n == 0) return std::nullopt;
    // rho^i maps 0 to i, so i is forced by pi(0).
    const auto i = static_cast<std::size_t>(pi(0));
    for (std::size_t j = 0; j < n; ++j)
        if (static_cast<std::size_t>(pi(j)) != (j + i) % n) return std::nullopt;
    return i;
}

inline bool is_counterexample_sigma(const Permutation& sigma)
{
    if (sigma.size() == 0) return false;
    return !power_of_cyclic(conjugate(sigma, cyclic(sigma.size()))).has_value();
}

inline std::size_t euler_phi(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("euler_phi needs n >= 1");
    std::size_t result = n, m = n;
    for (std::size_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        while (m % p == 0) m /= p;
        result -= result / p;
    }
    if (m > 1) result -= result / m;
    return result;
}

inline unsigned long long factorial(std::size_t n)
{
    unsigned long long f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

/// n! - n*phi(n).
inline unsigned long long counterexample_count_formula(std::size_t n)
{
    return factorial(n) - static_cast<unsigned long long>(n) * euler_phi(n);
}

inline constexpr std::size_t default_sn_cap = 8;

inline void check_sn_cap(std::size_t n, std::size_t cap)
{
    if (n > cap)
        throw std::out_of_range("n = " + std::to_string(n) + " exceeds the S_n enumeration cap " +
                                std::to_string(cap));
}

/// Every permutation of size n in lexicographic order of image arrays.
inline std::vector<Permutation> all_permutations(std::size_t n, std::size_t cap = default_sn_cap)
{
    check_sn_cap(n, cap);
    std::vector<Permutation> out;
    out.reserve(factorial(n));
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    do out.emplace_back(img);
    while (std::next_permutation(img.begin(), img.end()));
    return out;
}

namespace detail {

// Counterexample sigmas whose image starts with `first`, lexicographic.
inline std::vector<Permutation> counterexample_block(std::size_t n, int first)
{
    std::vector<Permutation> out;
    std::vector<int> rest;
    for (int v = 0; v < static_cast<int>(n); ++v)
        if (v != first) rest.push_back(v);
    const Permutation rho = cyclic(n);
    std::vector<int> img(n);
    do {
        img[0] = first;
        std::copy(rest.begin(), rest.end(), img.begin() + 1);
        Permutation s(img);
        if (!power_of_cyclic(conjugate(s, rho))) out.push_back(std::move(s));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

} // namespace detail

/// All sigma with sigma rho sigma^-1 outside <rho>, in lexicographic order.
/// Work is split into blocks by the first image value; blocks are merged in
/// order so the result does not depend on `workers`.
inline std::vector<Permutation> enumerate_counterexample_sigmas(std::size_t n, std::size_t cap = default_sn_cap,
                                                                std::size_t workers = 1)
{
    if (n == 0) throw std::invalid_argument("enumeration needs n >= 1");
    check_sn_cap(n, cap);
    std::vector<std::vector<Permutation>> blocks(n);
    if (workers <= 1) {
        for (std::size_t f = 0; f < n; ++f) blocks[f] = detail::counterexample_block(n, static_cast<int>(f));
    } else {
        for (std::size_t start = 0; start < n; start += workers) {
            std::vector<std::future<std::vector<Permutation>>> jobs;
            for (std::size_t f = start; f < std::min(n, start + workers); ++f)
                jobs.push_back(std::async(std::launch::async, detail::counterexample_block, n, static_cast<int>(f)));
            for (std::size_t k = 0; k < jobs.size(); ++k) blocks[start + k] = jobs[k].get();
        }
    }
    std::vector<Permutation> out;
    for (auto& b : blocks) std::move(b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// One-line 1-based form, "2 3 4 1".
inline std::string to_string(const Permutation& p)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p(i) + 1;
    return os.str();
}

/// Product of disjoint nontrivial cycles, "(1 2 4 3)"; "()" for the identity.
inline std::string to_cycle_string(const Permutation& p)
{
    std::ostringstream os;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (seen[s] || p(s) == static_cast<int>(s)) {
            seen[s] = true;
            continue;
        }
        os << '(';
        for (std::size_t i = s; !seen[i]; i = static_cast<std::size_t>(p(i))) {
            if (i != s) os << ' ';
            os << i + 1;
            seen[i] = true;
        }
        os << ')';
    }
    auto s = os.str();
    return s.empty() ? "()" : s;
}

/// Accepts "identity"/"id", cycle products such as "(3 4)" or "(1 2)(3 4)"
/// (cycles compose right to left), or a one-line image such as "1 2 4 3".
inline Permutation parse_permutation(std::string_view text, std::size_t n)
{
    std::string s(text);
    auto trimmed = s;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
    if (trimmed == "identity" || trimmed == "id" || trimmed == "()" || trimmed == "e")
        return Permutation::identity(n);

    auto read_ints = [&](const std::string& chunk) {
        std::vector<int> v;
        std::istringstream is(chunk);
        std::string tok;
        while (is >> tok) {
            if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }))
                throw std::invalid_argument("bad token '" + tok + "' in permutation '" + s + "'");
            v.push_back(std::stoi(tok));
        }
        return v;
    };

    if (trimmed.find('(') == std::string::npos) {
        auto img = read_ints(trimmed);
        if (img.size() != n)
            throw std::invalid_argument("one-line permutation '" + s + "' has " + std::to_string(img.size()) +
                                        " entries, expected " + std::to_string(n));
        return Permutation::from_one_based(img);
    }

    Permutation result = Permutation::identity(n);
    std::size_t pos = 0;
    while (pos < trimmed.size()) {
        if (trimmed[pos] == ' ' || trimmed[pos] == '\t') {
            ++pos;
            continue;
        }
        if (trimmed[pos] != '(') throw std::invalid_argument("expected '(' in permutation '" + s + "'");
        auto close = trimmed.find(')', pos);
        if (close == std::string::npos) throw std::invalid_argument("unclosed cycle in '" + s + "'");
        auto cyc = read_ints(trimmed.substr(pos + 1, close - pos - 1));
        std::vector<int> img(n);
        std::iota(img.begin(), img.end(), 0);
        std::vector<bool> used(n, false);
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int v = cyc[i];
            if (v < 1 || static_cast<std::size_t>(v) > n)
                throw std::invalid_argument("cycle entry " + std::to_string(v) + " outside 1.." + std::to_string(n));
            if (used[v - 1]) throw std::invalid_argument("repeated entry in cycle of '" + s + "'");
            used[v - 1] = true;
            img[v - 1] = cyc[(i + 1) % cyc.size()] - 1;
        }
        // Written left to right, applied right to left.
        result = compose(result, Permutation(std::move(img)));
        pos = close + 1;
    }
    return result;
}

} // namespace phipsi

#endif // PHIPSI_PERMUTATIONS_HPP
