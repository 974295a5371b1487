#include "axilab/report.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace axilab {
namespace {

using ordered_json = nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << text;
    if (!os) throw std::runtime_error("write failed for " + path);
}

double json_safe(double v) {
    // JSON has no infinities; report saturated sentinels instead
    if (std::isnan(v)) return -1.0;
    if (std::isinf(v)) return v > 0 ? 1e300 : -1e300;
    return v;
}

ordered_json entry_json(const VerifierEntry& e) {
    ordered_json j;
    j["name"] = e.name;
    j["lhs"] = json_safe(e.lhs);
    j["rhs"] = json_safe(e.rhs);
    j["ratio"] = json_safe(e.ratio);
    j["pass"] = verdict_name(e.verdict);
    j["slack"] = e.slack;
    j["scale"] = e.scale;
    j["config"] = e.config;
    return j;
}

} // namespace

std::string verdict_name(VerifierEntry::Verdict v) {
    switch (v) {
        case VerifierEntry::Verdict::pass: return "pass";
        case VerifierEntry::Verdict::fail: return "fail";
        case VerifierEntry::Verdict::hypothesis_failed: return "hypothesis_failed";
        case VerifierEntry::Verdict::vacuous: return "vacuous";
    }
    return "unknown";
}

std::string diagnostics_to_json(const DiagnosticsReport& rep) {
    ordered_json j;
    if (rep.has_enorm) {
        j["hse"] = json_safe(rep.enorm.hse);
        j["bmo"] = json_safe(rep.enorm.bmo);
        j["sup_rb3"] = json_safe(rep.enorm.sup_rb3);
        j["e_norm"] = json_safe(rep.enorm.total);
    }
    if (rep.has_profile) {
        ordered_json scales = ordered_json::array();
        for (const auto& e : rep.profile.entries) {
            ordered_json s;
            s["R"] = e.R;
            s["m"] = e.m;
            s["M"] = e.M;
            s["J"] = e.J;
            scales.push_back(s);
        }
        j["per_scale"] = scales;
    }
    if (rep.has_fit) {
        j["alpha"] = json_safe(rep.fit.alpha);
        j["fit_residual"] = json_safe(rep.fit.residual);
    }
    if (rep.liouville.present) {
        ordered_json l;
        ordered_json cands = ordered_json::array();
        for (const auto& c : rep.liouville.candidates) {
            ordered_json cj;
            cj["r"] = c.r_k;
            cj["z"] = c.z_k;
            cj["t"] = c.t_k;
            cj["Q"] = c.Q_k;
            cj["gamma"] = c.gamma_k;
            cands.push_back(cj);
        }
        l["candidates"] = cands;
        l["rk_qk"] = json_safe(rep.liouville.rk_qk);
        l["case_label"] = rep.liouville.case_label;
        l["swirl_residual"] = json_safe(rep.liouville.swirl_sup);
        l["swirl_bound"] = json_safe(rep.liouville.swirl_bound);
        l["planar_residual"] = json_safe(rep.liouville.planar);
        l["constancy_residual"] = json_safe(rep.liouville.constancy);
        l["mean_value_defect"] = json_safe(rep.liouville.mean_value_defect);
        j["liouville"] = l;
    }
    if (!rep.extras.empty()) {
        ordered_json x;
        for (const auto& [k, v] : rep.extras) x[k] = json_safe(v);
        j["suite"] = x;
    }
    ordered_json prov;
    prov["artifact_version"] = rep.artifact_version;
    prov["config_hash"] = rep.config_hash_hex;
    prov["grid"] = rep.grid_desc;
    prov["anchor_z"] = rep.anchor_z;
    prov["anchor_t"] = rep.anchor_t;
    j["provenance"] = prov;
    return j.dump(2) + "\n";
}

void write_diagnostics_json(const std::string& path, const DiagnosticsReport& rep) {
    write_text(path, diagnostics_to_json(rep));
}

void write_diagnostics_csv(const std::string& path, const DiagnosticsReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "kind,name,value\n";
    if (rep.has_enorm) {
        os << "norm,hse," << rep.enorm.hse << '\n';
        os << "norm,bmo," << rep.enorm.bmo << '\n';
        os << "norm,sup_rb3," << rep.enorm.sup_rb3 << '\n';
        os << "norm,e_norm," << rep.enorm.total << '\n';
    }
    if (rep.has_fit) {
        os << "fit,alpha," << json_safe(rep.fit.alpha) << '\n';
        os << "fit,residual," << rep.fit.residual << '\n';
    }
    for (const auto& [k, v] : rep.extras) os << "suite," << k << ',' << v << '\n';
    if (rep.has_profile) {
        os << "scale,R,m,M,J\n";
        for (const auto& e : rep.profile.entries)
            os << "scale," << e.R << ',' << e.m << ',' << e.M << ',' << e.J << '\n';
    }
    write_text(path, os.str());
}

std::string verifier_to_json(const VerifierReport& rep) {
    ordered_json j;
    ordered_json entries = ordered_json::array();
    for (const auto& e : rep.entries) entries.push_back(entry_json(e));
    j["entries"] = entries;
    j["failures"] = rep.failures();
    j["all_passed"] = rep.all_passed();
    return j.dump(2) + "\n";
}

void write_verifier_json(const std::string& path, const VerifierReport& rep) {
    write_text(path, verifier_to_json(rep));
}

void write_manifest_json(const std::string& path, const RunManifest& manifest) {
    ordered_json j;
    j["artifact_version"] = manifest.artifact_version;
    j["config_hash"] = manifest.config_hash_hex;
    j["created_at"] = manifest.created_at;
    j["files"] = manifest.files;
    write_text(path, j.dump(2) + "\n");
}

void write_oscillation_svg(const std::string& path, const DiagnosticsReport& rep,
                           bool reproducible) {
    const int W = 640, H = 480, ML = 70, MR = 20, MT = 30, MB = 50;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    if (!reproducible) os << "<!-- generated by axilab " << kArtifactVersion << " -->\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
       << "oscillation J(R) vs scale R (log-log)</text>\n";

    std::vector<std::pair<double, double>> pts;
    if (rep.has_profile)
        for (const auto& e : rep.profile.entries)
            if (e.J > 0.0 && e.R > 0.0) pts.emplace_back(std::log10(e.R), std::log10(e.J));

    if (pts.empty()) {
        os << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
           << "\" text-anchor=\"middle\" font-size=\"12\" fill=\"gray\">no oscillation data</text>\n";
        os << "</svg>\n";
        write_text(path, os.str());
        return;
    }

    double xmin = pts[0].first, xmax = xmin, ymin = pts[0].second, ymax = ymin;
    for (auto [x, y] : pts) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    const double xpad = 0.05 * std::max(xmax - xmin, 1e-3);
    const double ypad = 0.05 * std::max(ymax - ymin, 1e-3);
    xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
       << H - MB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 14
       << "\" text-anchor=\"middle\" font-size=\"12\">log10 R</text>\n";
    os << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
       << "\" font-size=\"12\" transform=\"rotate(-90 16 " << (MT + H - MB) / 2
       << ")\">log10 J</text>\n";

    os << std::fixed << std::setprecision(2);
    for (auto [x, y] : pts)
        os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"4\" fill=\"#1f77b4\"/>\n";

    if (rep.has_fit && std::isfinite(rep.fit.alpha)) {
        const double ln10 = std::log(10.0);
        auto fit_y = [&](double x10) {
            // log10 J = alpha log10 R + log_c / ln 10
            return rep.fit.alpha * x10 + rep.fit.log_c / ln10;
        };
        os << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(fit_y(xmin)) << "\" x2=\"" << px(xmax)
           << "\" y2=\"" << py(fit_y(xmax)) << "\" stroke=\"#d62728\" stroke-dasharray=\"6 3\"/>\n";
        os << "<text x=\"" << W - MR - 10 << "\" y=\"" << MT + 16
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"#d62728\">alpha = "
           << std::setprecision(3) << rep.fit.alpha << "</text>\n";
    }
    os << "</svg>\n";
    write_text(path, os.str());
}

std::string verifier_table(const VerifierReport& rep) {
    std::ostringstream os;
    os << std::left << std::setw(34) << "check" << std::setw(14) << "lhs" << std::setw(14)
       << "rhs" << std::setw(12) << "ratio" << "verdict\n";
    os << std::string(80, '-') << '\n';
    os << std::setprecision(4) << std::scientific;
    for (const auto& e : rep.entries) {
        os << std::left << std::setw(34) << e.name << std::setw(14) << e.lhs << std::setw(14)
           << e.rhs << std::setw(12) << std::defaultfloat << std::setprecision(4) << e.ratio
           << verdict_name(e.verdict) << '\n'
           << std::scientific << std::setprecision(4);
    }
    os << std::string(80, '-') << '\n';
    os << (rep.all_passed() ? "all non-vacuous checks passed" : "FAILURES present") << " ("
       << rep.failures() << " failed of " << rep.entries.size() << ")\n";
    return os.str();
}

} // namespace axilab
