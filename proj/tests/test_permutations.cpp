#include "oracles.hpp"
#include "phipsi/permutations.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace phipsi;

namespace {

Permutation img(std::vector<int> one_based)
{
    return Permutation::from_one_based(one_based);
}

Permutation random_perm(std::size_t n, std::mt19937& rng)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), rng);
    return Permutation(v);
}

std::size_t gcd(std::size_t a, std::size_t b)
{
    return b ? gcd(b, a % b) : a;
}

} // namespace

TEST(Permutation, RejectsNonBijection)
{
    EXPECT_THROW(img({1, 1, 2}), std::invalid_argument);
    EXPECT_THROW(img({0, 1}), std::invalid_argument);
    EXPECT_THROW(img({1, 4, 2}), std::invalid_argument);
}

TEST(Cyclic, Images)
{
    EXPECT_EQ(cyclic(4).one_based(), (std::vector<int>{2, 3, 4, 1}));
    EXPECT_TRUE(cyclic(1).is_identity());
    EXPECT_EQ(cyclic(2).one_based(), (std::vector<int>{2, 1}));
    EXPECT_THROW(cyclic(0), std::invalid_argument);
}

TEST(Compose, ConventionAndConjugate)
{
    auto a = img({2, 3, 1}), b = img({1, 3, 2});
    // (a o b)(1) = a(b(1)) = a(1) = 2; (a o b)(2) = a(3) = 1
    EXPECT_EQ(compose(a, b).one_based(), (std::vector<int>{2, 1, 3}));
    EXPECT_THROW(compose(a, cyclic(4)), std::invalid_argument);

    auto rho = cyclic(4);
    EXPECT_EQ(conjugate(Permutation::identity(4), rho), rho);
    auto c = conjugate(parse_permutation("(3 4)", 4), rho);
    EXPECT_EQ(c.one_based(), (std::vector<int>{2, 4, 1, 3}));
    EXPECT_EQ(to_cycle_string(c), "(1 2 4 3)");
    // relabeling rule: the conjugate of rho is (sigma(1) ... sigma(n))
    EXPECT_EQ(c.image(), oracle::conjugate_of_rho(parse_permutation("(3 4)", 4).image()));
}

TEST(Compose, InverseProperty)
{
    std::mt19937 rng(3);
    for (int t = 0; t < 100; ++t) {
        auto a = random_perm(1 + t % 8, rng);
        EXPECT_TRUE(compose(a, inverse(a)).is_identity());
        EXPECT_TRUE(compose(inverse(a), a).is_identity());
    }
}

TEST(PowerOfCyclic, Cases)
{
    auto rho = cyclic(4);
    EXPECT_EQ(power_of_cyclic(power(rho, 2)), 2u);
    EXPECT_EQ(to_cycle_string(power(rho, 2)), "(1 3)(2 4)");
    EXPECT_FALSE(power_of_cyclic(parse_permutation("(1 2 4 3)", 4)));
    EXPECT_EQ(power_of_cyclic(Permutation::identity(4)), 0u);
    for (std::size_t e = 0; e < 6; ++e) EXPECT_EQ(power_of_cyclic(power(cyclic(6), e)), e);
}

TEST(CounterexampleSigma, Cases)
{
    EXPECT_TRUE(is_counterexample_sigma(parse_permutation("(3 4)", 4)));
    EXPECT_FALSE(is_counterexample_sigma(Permutation::identity(4)));
    EXPECT_FALSE(is_counterexample_sigma(cyclic(4)));
}

TEST(EulerPhi, Values)
{
    EXPECT_EQ(euler_phi(1), 1u);
    EXPECT_EQ(euler_phi(4), 2u);
    EXPECT_EQ(euler_phi(6), 2u);
    EXPECT_EQ(euler_phi(7), 6u);
    EXPECT_EQ(euler_phi(12), 4u);
    for (std::size_t n = 1; n <= 30; ++n) {
        std::size_t coprime = 0;
        for (std::size_t k = 1; k <= n; ++k) coprime += gcd(k, n) == 1;
        EXPECT_EQ(euler_phi(n), coprime) << n;
    }
    EXPECT_THROW(euler_phi(0), std::invalid_argument);
}

TEST(Enumerate, FrozenCountsMatchBruteForceAndFormula)
{
    // Counts frozen from oracle::brute_counterexample_count.
    const std::size_t frozen[] = {0, 0, 0, 16, 100, 708, 4998};
    for (std::size_t n = 1; n <= 7; ++n) {
        auto sigmas = enumerate_counterexample_sigmas(n);
        EXPECT_EQ(sigmas.size(), frozen[n - 1]) << n;
        EXPECT_EQ(sigmas.size(), counterexample_count_formula(n)) << n;
        if (n <= 6) {
            EXPECT_EQ(sigmas.size(), oracle::brute_counterexample_count(n)) << n;
        }
        EXPECT_TRUE(std::is_sorted(sigmas.begin(), sigmas.end())) << n;
    }
    EXPECT_TRUE(enumerate_counterexample_sigmas(3).empty());
}

TEST(Enumerate, WorkerCountDoesNotChangeOutput)
{
    auto one = enumerate_counterexample_sigmas(6, default_sn_cap, 1);
    EXPECT_EQ(enumerate_counterexample_sigmas(6, default_sn_cap, 4), one);
    EXPECT_EQ(enumerate_counterexample_sigmas(6, default_sn_cap, 6), one);
}

TEST(Enumerate, CapIsEnforced)
{
    EXPECT_THROW(enumerate_counterexample_sigmas(9), std::out_of_range);
    EXPECT_THROW(enumerate_counterexample_sigmas(5, 4), std::out_of_range);
    EXPECT_THROW(enumerate_counterexample_sigmas(0), std::invalid_argument);
}

TEST(Enumerate, ConjugateOfRhoIsAlwaysAnNCycle)
{
    for (std::size_t n = 1; n <= 6; ++n) {
        auto rho = cyclic(n);
        for (const auto& s : all_permutations(n)) ASSERT_TRUE(conjugate(s, rho).is_full_cycle());
    }
}

TEST(Enumerate, ConstantCoprimeStepCharacterization)
{
    // sigma rho sigma^-1 lies in <rho> iff sigma(i+1) - sigma(i) is a constant
    // (mod n) that is coprime to n. Checked, not relied on.
    for (std::size_t n = 1; n <= 7; ++n) {
        auto rho = cyclic(n);
        for (const auto& s : all_permutations(n)) {
            const std::size_t step = (static_cast<std::size_t>(s(1 % n)) + n - static_cast<std::size_t>(s(0))) % n;
            bool constant = true;
            for (std::size_t i = 0; i < n && constant; ++i)
                constant = (static_cast<std::size_t>(s((i + 1) % n)) + n - static_cast<std::size_t>(s(i))) % n == step;
            const bool characterized = constant && gcd(step, n) == 1;
            ASSERT_EQ(!is_counterexample_sigma(s), characterized || n == 1) << to_string(s);
        }
    }
}

TEST(Enumerate, FilterIsClosedUnderInverse)
{
    // sigma^-1 rho sigma in <rho>  <=>  sigma rho sigma^-1 in <rho>
    for (std::size_t n = 1; n <= 6; ++n)
        for (const auto& s : all_permutations(n))
            ASSERT_EQ(is_counterexample_sigma(s), is_counterexample_sigma(inverse(s)));
}

TEST(Parse, CycleAndOneLine)
{
    EXPECT_EQ(parse_permutation("(3 4)", 4).one_based(), (std::vector<int>{1, 2, 4, 3}));
    EXPECT_EQ(parse_permutation("1 2 4 3", 4), parse_permutation("(3 4)", 4));
    EXPECT_EQ(parse_permutation("(1 2 3 4)", 4), cyclic(4));
    EXPECT_TRUE(parse_permutation("identity", 5).is_identity());
    EXPECT_TRUE(parse_permutation("()", 3).is_identity());
    // right-to-left product: (1 2)(2 3) sends 3 -> 2 -> 1
    EXPECT_EQ(parse_permutation("(1 2)(2 3)", 3).one_based(), (std::vector<int>{2, 3, 1}));
    EXPECT_THROW(parse_permutation("(1 5)", 4), std::invalid_argument);
    EXPECT_THROW(parse_permutation("1 2 3", 4), std::invalid_argument);
    EXPECT_THROW(parse_permutation("(1 2", 4), std::invalid_argument);
    EXPECT_THROW(parse_permutation("(1 1)", 4), std::invalid_argument);
    EXPECT_THROW(parse_permutation("1 x 3 4", 4), std::invalid_argument);
}

TEST(Parse, CycleStringRoundTrip)
{
    std::mt19937 rng(11);
    for (int t = 0; t < 200; ++t) {
        auto p = random_perm(1 + t % 8, rng);
        ASSERT_EQ(parse_permutation(to_cycle_string(p), p.size()), p);
        ASSERT_EQ(parse_permutation(to_string(p), p.size()), p);
    }
}
