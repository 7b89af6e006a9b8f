#ifndef PHIPSI_CLI_HPP
#define PHIPSI_CLI_HPP

// Command-line front end. run_cli is the whole program minus main(), so the
// commands can be driven in-process by tests.
//
// Exit codes: 0 confirmed, 1 divergence from the expected result, 2 usage
// error, 3 a verification ran cleanly but sigma is outside the
// counterexample family (a stage reported the expected negative).

#include "CLI11.hpp"
#include "counterexample.hpp"
#include "report.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace phipsi {

enum ExitCode : int { exit_ok = 0, exit_divergence = 1, exit_usage = 2, exit_outside_family = 3 };

enum class OutputFormat { Text, Json };

struct CliConfig {
    std::string command;
    std::size_t n = 0;
    std::optional<std::string> sigma;
    OutputFormat format = OutputFormat::Text;
    std::optional<bool> run_lp;
    std::optional<std::string> output_path;
    std::size_t sn_cap = default_sn_cap;
    std::size_t workers = 1;
    bool strict_families = false;
    bool omit_timings = false;
    std::string target;
    std::string matrix_path;
    PsiMode mode = PsiMode::SupportFiltered;
    bool allow_large = false;
    std::optional<std::string> export_prefix;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Permutation require_sigma(const CliConfig& cfg)
{
    if (!cfg.sigma) throw UsageError(cfg.command + ": --sigma is required");
    try {
        return parse_permutation(*cfg.sigma, cfg.n);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--sigma: ") + e.what());
    }
}

inline RatMatrix read_matrix_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open matrix file '" + path + "'");
    try {
        return read_matrix(in);
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

inline std::string rational_list(const RatVector& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + to_string(v[i]);
    return s;
}

inline VerifyOptions verify_options(const CliConfig& cfg)
{
    VerifyOptions o;
    o.run_lp = cfg.run_lp;
    o.reading = cfg.strict_families ? FamilyReading::Literal : FamilyReading::Standard;
    return o;
}

inline int report_exit(const VerificationReport& r)
{
    if (r.divergence()) return exit_divergence;
    return r.all_pass() ? exit_ok : exit_outside_family;
}

} // namespace detail

inline int cmd_count_sigmas(const CliConfig& cfg, std::ostream& out)
{
    if (cfg.n > cfg.sn_cap) throw UsageError("n exceeds --sn-cap " + std::to_string(cfg.sn_cap));
    const auto count = enumerate_counterexample_sigmas(cfg.n, cfg.sn_cap, cfg.workers).size();
    const auto formula = counterexample_count_formula(cfg.n);
    if (cfg.format == OutputFormat::Json) {
        nlohmann::ordered_json j{{"n", cfg.n}, {"enumerated", count}, {"formula", formula}, {"match", count == formula}};
        out << j.dump(2) << '\n';
    } else {
        out << count << (count == formula ? " = " : " != ") << formula << '\n';
    }
    return count == formula ? exit_ok : exit_divergence;
}

inline int cmd_list_sigmas(const CliConfig& cfg, std::ostream& out)
{
    if (cfg.n > cfg.sn_cap) throw UsageError("n exceeds --sn-cap " + std::to_string(cfg.sn_cap));
    auto sigmas = enumerate_counterexample_sigmas(cfg.n, cfg.sn_cap, cfg.workers);
    if (cfg.format == OutputFormat::Json) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& s : sigmas) arr.push_back(s.one_based());
        out << arr.dump() << '\n';
    } else {
        for (const auto& s : sigmas) out << to_string(s) << '\n';
    }
    return exit_ok;
}

inline int cmd_build(const CliConfig& cfg, std::ostream& out)
{
    if (cfg.target == "A") {
        write_var_matrix(out, build_A(cfg.n));
    } else if (cfg.target == "B") {
        write_var_matrix(out, build_B(cfg.n, detail::require_sigma(cfg)));
    } else if (cfg.target == "T") {
        write_matrix(out, build_T(cfg.n, detail::require_sigma(cfg)));
    } else {
        throw UsageError("build target must be A, B or T");
    }
    return exit_ok;
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out)
{
    auto rep = full_verification(cfg.n, detail::require_sigma(cfg), detail::verify_options(cfg));
    if (cfg.format == OutputFormat::Json)
        out << to_json(rep, !cfg.omit_timings).dump(2) << '\n';
    else
        write_text(out, rep);
    if (auto f = rep.first_failure(); !f.empty() && cfg.format == OutputFormat::Text)
        out << "first failing stage: " << f << '\n';
    return detail::report_exit(rep);
}

inline int cmd_verify_all(const CliConfig& cfg, std::ostream& out)
{
    if (cfg.n > cfg.sn_cap) throw UsageError("n exceeds --sn-cap " + std::to_string(cfg.sn_cap));
    auto sigmas = enumerate_counterexample_sigmas(cfg.n, cfg.sn_cap, cfg.workers);
    const auto opts = detail::verify_options(cfg);
    std::vector<VerificationReport> reports(sigmas.size());
    const std::size_t batch = std::max<std::size_t>(1, cfg.workers);
    for (std::size_t start = 0; start < sigmas.size(); start += batch) {
        std::vector<std::future<VerificationReport>> jobs;
        for (std::size_t i = start; i < std::min(sigmas.size(), start + batch); ++i)
            jobs.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred,
                                      [&, i] { return full_verification(cfg.n, sigmas[i], opts); }));
        for (std::size_t k = 0; k < jobs.size(); ++k) reports[start + k] = jobs[k].get();
    }

    const std::size_t distinct = count_distinct_T(cfg.n, sigmas);
    const bool all = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.all_pass(); });
    const bool diverged = std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.divergence(); });

    if (cfg.format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["n"] = cfg.n;
        j["count"] = sigmas.size();
        j["formula"] = counterexample_count_formula(cfg.n);
        j["distinct_T"] = distinct;
        j["all_confirmed"] = all;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : reports) arr.push_back(to_json(r, !cfg.omit_timings));
        j["reports"] = std::move(arr);
        out << j.dump(2) << '\n';
    } else {
        write_summary_header(out);
        for (const auto& r : reports) write_summary_row(out, r);
        out << sigmas.size() << " sigmas, " << distinct << " distinct T, "
            << (all ? "all confirmed" : "NOT all confirmed") << '\n';
    }
    if (diverged || !all) return exit_divergence;
    return exit_ok;
}

inline int cmd_psi_oracle(const CliConfig& cfg, std::ostream& out)
{
    RatMatrix c = detail::read_matrix_file(cfg.matrix_path);
    if (c.rows() != cfg.n * cfg.n || c.cols() != cfg.n * cfg.n)
        throw UsageError("matrix is " + std::to_string(c.rows()) + "x" + std::to_string(c.cols()) + ", expected " +
                         std::to_string(cfg.n * cfg.n) + "x" + std::to_string(cfg.n * cfg.n));
    if (std::any_of(c.data().begin(), c.data().end(), [](const Rational& v) { return sgn(v) < 0; }))
        throw UsageError("matrix has negative entries");
    if (cfg.mode == PsiMode::Full && cfg.n > full_mode_default_cap && !cfg.allow_large)
        throw UsageError("full mode above n = " + std::to_string(full_mode_default_cap) + " needs --allow-large");

    auto res = psi_contains(c, cfg.n, cfg.mode, cfg.allow_large);
    const bool verified = res.in_psi ? weights_reconstruct(res, c, cfg.n) : psi_farkas_valid(c, cfg.n, *res.farkas);
    if (!verified) {
        out << "evidence failed re-verification\n";
        return exit_divergence;
    }
    if (cfg.format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["n"] = cfg.n;
        j["mode"] = cfg.mode == PsiMode::Full ? "full" : "support_filtered";
        j["in_psi"] = res.in_psi;
        j["columns"] = res.columns;
        j["verified"] = verified;
        if (res.in_psi) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& [v, w] : res.weights)
                arr.push_back({{"p", v.p.one_based()}, {"q", v.q.one_based()}, {"weight", to_string(w)}});
            j["weights"] = std::move(arr);
        } else {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& y : *res.farkas) arr.push_back(to_string(y));
            j["farkas"] = std::move(arr);
        }
        out << j.dump(2) << '\n';
    } else {
        out << "verdict: " << (res.in_psi ? "in" : "out") << '\n';
        out << "columns: " << res.columns << '\n';
        if (res.in_psi) {
            for (const auto& [v, w] : res.weights)
                out << "weight " << to_string(w) << " p=[" << to_string(v.p) << "] q=[" << to_string(v.q) << "]\n";
            out << "reconstruction verified\n";
        } else {
            out << "farkas: " << detail::rational_list(*res.farkas) << '\n';
            out << "certificate verified\n";
        }
    }
    return exit_ok;
}

inline int cmd_phi_check(const CliConfig& cfg, std::ostream& out)
{
    auto sys = build_phi_constraints(cfg.n, cfg.strict_families ? FamilyReading::Literal : FamilyReading::Standard);
    if (cfg.export_prefix) {
        std::ofstream text(*cfg.export_prefix + ".txt"), mat(*cfg.export_prefix + ".matrix"),
            labels(*cfg.export_prefix + ".labels");
        if (!text || !mat || !labels) throw UsageError("cannot write export files at '" + *cfg.export_prefix + "'");
        write_constraints_text(text, sys);
        write_matrix(mat, augmented(sys));
        write_labels(labels, sys);
    }
    if (cfg.matrix_path.empty()) {
        if (!cfg.export_prefix) throw UsageError("phi-check needs a matrix file or --export-system");
        out << sys.C.rows() << " constraints over " << sys.C.cols() << " variables exported\n";
        return exit_ok;
    }
    RatMatrix c = detail::read_matrix_file(cfg.matrix_path);
    if (c.rows() != cfg.n * cfg.n || c.cols() != cfg.n * cfg.n) throw UsageError("matrix dimension does not match n");
    auto check = phi_contains(c, sys);
    std::optional<bool> vertex;
    if (check) vertex = is_vertex_of_phi(c, sys);

    if (cfg.format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["n"] = cfg.n;
        j["in_phi"] = check.contained;
        j["violations"] = check.violations;
        j["is_vertex"] = vertex ? nlohmann::ordered_json(*vertex) : nlohmann::ordered_json(nullptr);
        out << j.dump(2) << '\n';
    } else {
        out << "in_phi: " << (check ? "yes" : "no") << '\n';
        for (const auto& v : check.violations) out << "  violated " << v << '\n';
        if (vertex) out << "is_vertex: " << (*vertex ? "yes" : "no") << '\n';
    }
    return check ? exit_ok : exit_outside_family;
}

/// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Constructs and checks the counterexample family separating Phi_{n,n} from Psi_{n,n}", "phipsi"};
    app.require_subcommand(1);
    CliConfig cfg;
    std::string format = "text", mode = "support";
    bool lp = false, no_lp = false;

    auto add_n = [&](CLI::App* sub) { sub->add_option("--n", cfg.n, "matrix order n")->required()->check(CLI::PositiveNumber); };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    };
    auto add_output = [&](CLI::App* sub) { sub->add_option("--output", cfg.output_path, "write to file instead of stdout"); };
    auto add_enum = [&](CLI::App* sub) {
        sub->add_option("--sn-cap", cfg.sn_cap, "largest n for full S_n enumeration");
        sub->add_option("--workers", cfg.workers, "parallel workers")->check(CLI::PositiveNumber);
    };
    auto add_lp = [&](CLI::App* sub) {
        sub->add_flag("--lp", lp, "run the full exact LP cross-check");
        sub->add_flag("--no-lp", no_lp, "skip the full exact LP cross-check");
        sub->add_flag("--strict-families", cfg.strict_families, "literal index ranges for balance families 3 and 4");
        sub->add_flag("--omit-timings", cfg.omit_timings, "leave timings out of JSON");
    };

    auto* count = app.add_subcommand("count-sigmas", "count counterexample sigmas against n! - n*phi(n)");
    add_n(count), add_format(count), add_output(count), add_enum(count);
    auto* list = app.add_subcommand("list-sigmas", "list counterexample sigmas in lexicographic order");
    add_n(list), add_format(list), add_output(list), add_enum(list);
    auto* build = app.add_subcommand("build", "print A, B or T");
    build->add_option("target", cfg.target, "A, B or T")->required()->check(CLI::IsMember({"A", "B", "T"}));
    add_n(build), add_output(build);
    build->add_option("--sigma", cfg.sigma, "permutation, cycle or one-line notation");
    auto* verify = app.add_subcommand("verify", "run the full verification for one sigma");
    add_n(verify), add_format(verify), add_output(verify), add_lp(verify);
    verify->add_option("--sigma", cfg.sigma, "permutation, cycle or one-line notation")->required();
    auto* verify_all = app.add_subcommand("verify-all", "verify every counterexample sigma for n");
    add_n(verify_all), add_format(verify_all), add_output(verify_all), add_lp(verify_all), add_enum(verify_all);
    auto* psi = app.add_subcommand("psi-oracle", "decide membership in Psi for a matrix file");
    psi->add_option("matrix", cfg.matrix_path, "matrix text file")->required();
    add_n(psi), add_format(psi), add_output(psi);
    psi->add_option("--mode", mode, "support or full")->check(CLI::IsMember({"support", "full"}));
    psi->add_flag("--allow-large", cfg.allow_large, "permit full mode above n = 4");
    auto* phi = app.add_subcommand("phi-check", "check membership and vertexhood in Phi");
    phi->add_option("matrix", cfg.matrix_path, "matrix text file");
    add_n(phi), add_format(phi), add_output(phi);
    phi->add_flag("--strict-families", cfg.strict_families, "literal index ranges for balance families 3 and 4");
    phi->add_option("--export-system", cfg.export_prefix, "write PREFIX.txt, PREFIX.matrix, PREFIX.labels");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    cfg.mode = mode == "full" ? PsiMode::Full : PsiMode::SupportFiltered;
    if (lp && no_lp) {
        err << "error: --lp and --no-lp are exclusive\n";
        return exit_usage;
    }
    if (lp || no_lp) cfg.run_lp = lp;

    std::ofstream file;
    if (cfg.output_path) {
        file.open(*cfg.output_path);
        if (!file) {
            err << "error: cannot open output '" << *cfg.output_path << "'\n";
            return exit_usage;
        }
    }
    std::ostream& sink = cfg.output_path ? file : out;

    try {
        if (cfg.command == "count-sigmas") return cmd_count_sigmas(cfg, sink);
        if (cfg.command == "list-sigmas") return cmd_list_sigmas(cfg, sink);
        if (cfg.command == "build") return cmd_build(cfg, sink);
        if (cfg.command == "verify") return cmd_verify(cfg, sink);
        if (cfg.command == "verify-all") return cmd_verify_all(cfg, sink);
        if (cfg.command == "psi-oracle") return cmd_psi_oracle(cfg, sink);
        return cmd_phi_check(cfg, sink);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_divergence;
    }
}

} // namespace phipsi

#endif // PHIPSI_CLI_HPP
