#include "phipsi/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace phipsi;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_file(const std::string& name, const std::string& content)
{
    auto p = std::filesystem::temp_directory_path() / ("phipsi_test_" + name);
    std::ofstream(p) << content;
    return p;
}

const std::string golden_dir = PHIPSI_GOLDEN_DIR;

} // namespace

TEST(CliCountSigmas, MatchesFormula)
{
    EXPECT_EQ(run({"count-sigmas", "--n", "4"}).out, "16 = 16\n");
    EXPECT_EQ(run({"count-sigmas", "--n", "3"}).out, "0 = 0\n");
    auto six = run({"count-sigmas", "--n", "6", "--workers", "3"});
    EXPECT_EQ(six.code, exit_ok);
    EXPECT_EQ(six.out, "708 = 708\n");
    EXPECT_EQ(run({"count-sigmas", "--n", "9"}).code, exit_usage);
    EXPECT_EQ(run({"count-sigmas", "--n", "5", "--sn-cap", "4"}).code, exit_usage);
    auto j = nlohmann::json::parse(run({"count-sigmas", "--n", "5", "--format", "json"}).out);
    EXPECT_EQ(j["enumerated"], 100);
    EXPECT_EQ(j["match"], true);
}

TEST(CliListSigmas, Lexicographic)
{
    auto r = run({"list-sigmas", "--n", "4"});
    EXPECT_EQ(r.code, exit_ok);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 16);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "1 2 4 3");
}

TEST(CliBuild, MatchesPrintedMatrices)
{
    EXPECT_EQ(run({"build", "T", "--n", "4", "--sigma", "(3 4)"}).out, slurp(golden_dir + "/T_n4_sigma34.txt"));
    EXPECT_EQ(run({"build", "A", "--n", "4"}).out, slurp(golden_dir + "/A_n4.txt"));
    EXPECT_EQ(run({"build", "B", "--n", "4", "--sigma", "1 2 4 3"}).out, slurp(golden_dir + "/B_n4_sigma34.txt"));
    EXPECT_EQ(run({"build", "B", "--n", "2", "--sigma", "identity"}).out, run({"build", "A", "--n", "2"}).out);
}

TEST(CliBuild, UsageErrors)
{
    EXPECT_EQ(run({"build", "T", "--n", "4"}).code, exit_usage);
    EXPECT_EQ(run({"build", "X", "--n", "4"}).code, exit_usage);
    EXPECT_EQ(run({"build", "T", "--n", "4", "--sigma", "(1 9)"}).code, exit_usage);
    EXPECT_EQ(run({"build", "T", "--n", "0", "--sigma", "()"}).code, exit_usage);
    EXPECT_EQ(run({}).code, exit_usage);
    EXPECT_EQ(run({"frobnicate"}).code, exit_usage);
}

TEST(CliBuild, OutputFile)
{
    auto p = std::filesystem::temp_directory_path() / "phipsi_test_T.txt";
    EXPECT_EQ(run({"build", "T", "--n", "4", "--sigma", "(3 4)", "--output", p.string()}).code, exit_ok);
    EXPECT_EQ(slurp(p), slurp(golden_dir + "/T_n4_sigma34.txt"));
    std::filesystem::remove(p);
}

TEST(CliVerify, ExitCodes)
{
    auto ok = run({"verify", "--n", "4", "--sigma", "(3 4)", "--lp"});
    EXPECT_EQ(ok.code, exit_ok);
    EXPECT_NE(ok.out.find("verdict: confirmed"), std::string::npos);

    auto id = run({"verify", "--n", "4", "--sigma", "identity"});
    EXPECT_EQ(id.code, exit_outside_family);
    EXPECT_NE(id.out.find("first failing stage: lemma1"), std::string::npos);
    auto idj = nlohmann::json::parse(run({"verify", "--n", "4", "--sigma", "identity", "--format", "json"}).out);
    EXPECT_EQ(idj["psi_lp_status"], "feasible");
    EXPECT_EQ(idj["in_phi"], true);

    auto five = nlohmann::json::parse(run({"verify", "--n", "5", "--sigma", "(4 5)", "--format", "json"}).out);
    EXPECT_EQ(five["psi_lp_status"], "skipped");
    EXPECT_EQ(five["theorem_confirmed"], true);
    EXPECT_EQ(run({"verify", "--n", "5", "--sigma", "(4 5)"}).code, exit_ok);

    EXPECT_EQ(run({"verify", "--n", "4", "--sigma", "(3 4)", "--lp", "--no-lp"}).code, exit_usage);
}

TEST(CliVerify, JsonIsDeterministicWithoutTimings)
{
    std::vector<std::string> args{"verify", "--n", "4", "--sigma", "(3 4)", "--lp", "--format", "json", "--omit-timings"};
    auto a = run(args), b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, slurp(golden_dir + "/report_n4_sigma34.json"));
}

TEST(CliVerify, StrictFamilies)
{
    auto r = run({"verify", "--n", "4", "--sigma", "(3 4)", "--strict-families", "--format", "json"});
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["in_phi"], true);
    EXPECT_EQ(j["psi_certificate_pass"], true);
}

TEST(CliVerifyAll, FourIsAllConfirmed)
{
    auto r = run({"verify-all", "--n", "4", "--no-lp", "--workers", "2"});
    EXPECT_EQ(r.code, exit_ok);
    EXPECT_NE(r.out.find("16 sigmas, 16 distinct T, all confirmed"), std::string::npos);
    auto j = nlohmann::json::parse(run({"verify-all", "--n", "4", "--no-lp", "--format", "json"}).out);
    EXPECT_EQ(j["reports"].size(), 16u);
    EXPECT_EQ(j["all_confirmed"], true);
}

TEST(CliPsiOracle, Verdicts)
{
    std::ostringstream k;
    write_matrix(k, kron(cyclic(4), inverse(cyclic(4))));
    auto kp = temp_file("kron.txt", k.str());
    auto in = run({"psi-oracle", kp.string(), "--n", "4"});
    EXPECT_EQ(in.code, exit_ok);
    EXPECT_NE(in.out.find("verdict: in"), std::string::npos);
    EXPECT_NE(in.out.find("weight 1 p=[2 3 4 1] q=[4 1 2 3]"), std::string::npos);

    auto out = run({"psi-oracle", golden_dir + "/T_n4_sigma34.txt", "--n", "4", "--mode", "full"});
    EXPECT_EQ(out.code, exit_ok);
    EXPECT_NE(out.out.find("verdict: out"), std::string::npos);
    EXPECT_NE(out.out.find("certificate verified"), std::string::npos);

    // half-half mixture of two tensor products
    auto k1 = kron(cyclic(4), Permutation::identity(4));
    auto k2 = kron(parse_permutation("(1 2)", 4), parse_permutation("(3 4)", 4));
    RatMatrix mix(16, 16);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c) mix(r, c) = make_rational(1, 2) * (k1(r, c) + k2(r, c));
    auto up = temp_file("mix.txt", matrix_to_string(mix));
    auto uj = nlohmann::json::parse(run({"psi-oracle", up.string(), "--n", "4", "--format", "json"}).out);
    EXPECT_EQ(uj["in_psi"], true);
    EXPECT_EQ(uj["verified"], true);
    EXPECT_EQ(uj["weights"].size(), 2u);

    std::filesystem::remove(kp);
    std::filesystem::remove(up);
}

TEST(CliPsiOracle, UsageErrors)
{
    EXPECT_EQ(run({"psi-oracle", "/nonexistent/file", "--n", "4"}).code, exit_usage);
    auto bad = temp_file("bad.txt", "2 2\n1 x\n0 1\n");
    EXPECT_EQ(run({"psi-oracle", bad.string(), "--n", "1"}).code, exit_usage);
    EXPECT_EQ(run({"psi-oracle", golden_dir + "/T_n4_sigma34.txt", "--n", "3"}).code, exit_usage);
    auto neg = temp_file("neg.txt", "1 1\n-1\n");
    EXPECT_EQ(run({"psi-oracle", neg.string(), "--n", "1"}).code, exit_usage);
    std::filesystem::remove(bad);
    std::filesystem::remove(neg);
}

TEST(CliPhiCheck, MembershipAndExport)
{
    auto r = run({"phi-check", golden_dir + "/T_n4_sigma34.txt", "--n", "4"});
    EXPECT_EQ(r.code, exit_ok);
    EXPECT_EQ(r.out, "in_phi: yes\nis_vertex: yes\n");

    auto prefix = (std::filesystem::temp_directory_path() / "phipsi_test_sys").string();
    auto e = run({"phi-check", "--n", "2", "--export-system", prefix});
    EXPECT_EQ(e.code, exit_ok);
    auto m = parse_matrix(slurp(prefix + ".matrix"));
    EXPECT_EQ(m.rows(), 24u);
    EXPECT_EQ(m.cols(), 17u);
    auto labels = slurp(prefix + ".labels");
    EXPECT_EQ(std::count(labels.begin(), labels.end(), '\n'), 24);
    EXPECT_EQ(slurp(prefix + ".txt").substr(0, 17), "row-sum(i=1,k=1) ");
    for (auto ext : {".txt", ".matrix", ".labels"}) std::filesystem::remove(prefix + ext);

    EXPECT_EQ(run({"phi-check", "--n", "2"}).code, exit_usage);
}
