#include "oracles.hpp"
#include "phipsi/symbolic.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace phipsi;

namespace {

VarMatrix golden(const std::string& name)
{
    std::ifstream in(std::string(PHIPSI_GOLDEN_DIR) + "/" + name);
    return read_var_matrix(in);
}

} // namespace

TEST(BuildA, MatchesPrintedMatrix)
{
    EXPECT_EQ(build_A(4), golden("A_n4.txt"));
    EXPECT_EQ(var_matrix_to_string(build_A(1)), "1\n1\n");
    EXPECT_EQ(var_matrix_to_string(build_A(2)), "2\n1 2\n2 1\n");
    EXPECT_THROW(build_A(0), std::invalid_argument);
}

TEST(BuildB, MatchesPrintedMatrix)
{
    EXPECT_EQ(build_B(4, parse_permutation("(3 4)", 4)), golden("B_n4_sigma34.txt"));
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(build_B(n, Permutation::identity(n)), build_A(n));
    EXPECT_THROW(build_B(4, Permutation::identity(3)), std::invalid_argument);
}

TEST(BuildB, RhoGivesRowRotatedA)
{
    auto b = build_B(4, cyclic(4));
    auto a = build_A(4);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(b(0, k), static_cast<int>(k + 1) % 4 + 1);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t l = 0; l < 4; ++l) EXPECT_EQ(b(j, l), a((j + 1) % 4, l));
}

TEST(BuildB, LatinForEverySigma)
{
    for (std::size_t n = 1; n <= 6; ++n) {
        ASSERT_TRUE(build_A(n).is_latin());
        for (const auto& s : all_permutations(n)) ASSERT_TRUE(build_B(n, s).is_latin());
    }
}

TEST(ApplyPQ, Convention)
{
    auto a = build_A(4);
    auto id = Permutation::identity(4);
    EXPECT_EQ(apply_PQ(a, id, id), a);
    // rows cycle upward by one
    auto r = apply_PQ(a, cyclic(4), id);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(r(i, k), a((i + 1) % 4, k));
    EXPECT_THROW(apply_PQ(a, cyclic(3), id), std::invalid_argument);
}

TEST(ExistsPQ, Cases)
{
    auto a = build_A(4);
    auto found = exists_PQ(a, build_B(4, Permutation::identity(4)));
    ASSERT_TRUE(found);
    EXPECT_TRUE(found->first.is_identity());
    EXPECT_TRUE(found->second.is_identity());
    EXPECT_EQ(apply_PQ(build_B(4, Permutation::identity(4)), found->first, found->second), a);

    EXPECT_FALSE(exists_PQ(a, build_B(4, parse_permutation("(3 4)", 4))));

    auto rot = exists_PQ(a, build_B(4, cyclic(4)));
    ASSERT_TRUE(rot);
    EXPECT_EQ(apply_PQ(build_B(4, cyclic(4)), rot->first, rot->second), a);
}

TEST(ExistsPQ, AgreesWithExhaustiveSearch)
{
    for (std::size_t n = 1; n <= 4; ++n) {
        auto a = build_A(n);
        for (const auto& s : all_permutations(n)) {
            auto b = build_B(n, s);
            auto fast = exists_PQ(a, b);
            auto brute = oracle::brute_exists_PQ(a, b);
            ASSERT_EQ(fast.has_value(), brute.has_value()) << to_string(s);
            // both return the lexicographically smallest pair
            if (fast) {
                ASSERT_EQ(*fast, *brute) << to_string(s);
            }
        }
    }
}

TEST(ExistsPQ, AbsentExactlyForCounterexampleSigmas)
{
    // One direction is the theorem being tested; the converse is observed.
    for (std::size_t n = 1; n <= 5; ++n) {
        auto a = build_A(n);
        for (const auto& s : all_permutations(n)) {
            const bool absent = !exists_PQ(a, build_B(n, s)).has_value();
            ASSERT_EQ(absent, is_counterexample_sigma(s)) << "n=" << n << " sigma=" << to_string(s);
            // the other orientation, sigma^-1 rho sigma
            const bool inv_orientation = !power_of_cyclic(conjugate(inverse(s), cyclic(n))).has_value();
            ASSERT_EQ(absent, inv_orientation);
        }
    }
}

TEST(ExistsPQ, SixIsTractable)
{
    auto a = build_A(6);
    std::size_t absent = 0;
    for (const auto& s : all_permutations(6)) absent += !exists_PQ(a, build_B(6, s));
    EXPECT_EQ(absent, 708u);
}

TEST(VarMatrixText, RejectsNonLatin)
{
    std::istringstream in("2\n1 1\n2 2\n");
    auto m = read_var_matrix(in);
    EXPECT_FALSE(m.is_latin());
    EXPECT_THROW(exists_PQ(m, build_A(2)), std::invalid_argument);
    std::istringstream shortin("3\n1 2 3\n");
    EXPECT_THROW(read_var_matrix(shortin), std::invalid_argument);
}
