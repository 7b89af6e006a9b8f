#ifndef PHIPSI_REPORT_HPP
#define PHIPSI_REPORT_HPP

// JSON and text renderings of verification reports. JSON is the stable
// machine format; timings live under a single "timings" key so they can be
// dropped for byte-exact comparisons.

#include "counterexample.hpp"
#include "json.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace phipsi {

inline nlohmann::ordered_json to_json(const VerificationReport& r, bool with_timings = true)
{
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["sigma"] = r.sigma.one_based();
    j["sigma_cycles"] = to_cycle_string(r.sigma);
    j["lemma1_pass"] = r.lemma1_pass;
    j["lemma2_pass"] = r.lemma2_pass;
    j["transfer_identity_pass"] = r.transfer_identity_pass;
    j["block_structure_pass"] = r.block_structure_pass;
    j["in_phi"] = r.in_phi;
    j["is_vertex"] = r.is_vertex;
    j["psi_certificate_pass"] = r.psi_certificate_pass;
    j["psi_lp_status"] = to_string(r.psi_lp_status);
    j["support_size"] = r.support_size;
    j["support_rank"] = r.support_rank;
    j["phi_rows"] = r.phi_rows;
    j["lp_columns"] = r.lp_columns;
    j["lp_evidence_verified"] = r.lp_evidence_verified;
    j["theorem_confirmed"] = r.all_pass();
    j["divergence"] = r.divergence();
    j["error"] = r.error ? nlohmann::ordered_json(*r.error) : nlohmann::ordered_json(nullptr);
    j["notes"] = r.notes;
    auto stages = nlohmann::ordered_json::array();
    for (const auto& s : r.stages) {
        nlohmann::ordered_json st;
        st["name"] = s.name;
        st["status"] = to_string(s.status);
        st["detail"] = s.detail;
        stages.push_back(std::move(st));
    }
    j["stages"] = std::move(stages);
    if (with_timings) {
        nlohmann::ordered_json t;
        for (const auto& s : r.stages) t[s.name] = s.seconds;
        j["timings"] = std::move(t);
    }
    return j;
}

inline void write_summary_header(std::ostream& os)
{
    os << std::left << std::setw(16) << "sigma" << std::setw(8) << "lemma1" << std::setw(8) << "lemma2"
       << std::setw(10) << "transfer" << std::setw(8) << "blocks" << std::setw(8) << "in_phi" << std::setw(8)
       << "vertex" << std::setw(8) << "cert" << std::setw(22) << "psi_lp" << "verdict\n";
}

inline void write_summary_row(std::ostream& os, const VerificationReport& r)
{
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    os << std::left << std::setw(16) << to_cycle_string(r.sigma) << std::setw(8) << yn(r.lemma1_pass) << std::setw(8)
       << yn(r.lemma2_pass) << std::setw(10) << yn(r.transfer_identity_pass) << std::setw(8)
       << yn(r.block_structure_pass) << std::setw(8) << yn(r.in_phi) << std::setw(8) << yn(r.is_vertex)
       << std::setw(8) << yn(r.psi_certificate_pass) << std::setw(22) << to_string(r.psi_lp_status)
       << (r.divergence() ? "DIVERGENCE" : r.all_pass() ? "confirmed" : "outside family") << '\n';
}

/// Human-readable; not a stable format.
inline void write_text(std::ostream& os, const VerificationReport& r)
{
    os << "n = " << r.n << ", sigma = " << to_cycle_string(r.sigma) << " [" << to_string(r.sigma) << "]\n";
    for (const auto& s : r.stages) {
        os << "  " << std::left << std::setw(18) << s.name << std::setw(8) << to_string(s.status);
        if (!s.detail.empty()) os << s.detail;
        os << '\n';
    }
    for (const auto& note : r.notes) os << "  note: " << note << '\n';
    os << "  verdict: " << (r.divergence() ? "DIVERGENCE" : r.all_pass() ? "confirmed" : "outside family") << '\n';
}

} // namespace phipsi

#endif // PHIPSI_REPORT_HPP
