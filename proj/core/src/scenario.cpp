#include "axilab/scenario.hpp"

#include "axilab/field_io.hpp"
#include "axilab/gamma_solver.hpp"
#include "axilab/liouville.hpp"
#include "axilab/ns_solver.hpp"
#include "axilab/presets.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace axilab {
namespace {

const double kPi = std::acos(-1.0);

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string now_iso(bool reproducible) {
    if (reproducible) return "1970-01-01T00:00:00Z";
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string grid_desc(const Grid& g) {
    std::ostringstream os;
    os << g.nr << "x" << g.nz << " on [0," << g.r_max << "]x[0," << g.z_len << "]";
    return os.str();
}

std::string snap_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06zu.bin", k);
    return buf;
}

void write_snapshot_index(const std::string& path, const std::vector<double>& times) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os.precision(17);
    os << "k,t,file\n";
    for (std::size_t k = 0; k < times.size(); ++k)
        os << k << ',' << times[k] << ',' << snap_name(k) << '\n';
}

// --- estimate checks shared by run and re-verify ----------------------------

struct MaxPrincipleStats {
    double sup_excess = 0.0;
    double inf_excess = 0.0;
};

MaxPrincipleStats max_principle_from_stats(const std::vector<GammaStepStats>& stats) {
    MaxPrincipleStats m;
    if (stats.empty()) return m;
    const double sup0 = stats.front().sup, inf0 = stats.front().inf;
    for (const auto& s : stats) {
        m.sup_excess = std::max(m.sup_excess, s.sup - sup0);
        m.inf_excess = std::max(m.inf_excess, inf0 - s.inf);
    }
    return m;
}

MaxPrincipleStats max_principle_from_snapshots(const ScalarTrajectory& traj) {
    MaxPrincipleStats m;
    const double sup0 = traj.snapshot(0).max_value();
    const double inf0 = traj.snapshot(0).min_value();
    for (std::size_t k = 1; k < traj.size(); ++k) {
        m.sup_excess = std::max(m.sup_excess, traj.snapshot(k).max_value() - sup0);
        m.inf_excess = std::max(m.inf_excess, inf0 - traj.snapshot(k).min_value());
    }
    return m;
}

VerifierEntry nash_property_entry(std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double M = 2.0;
    double max_excess = -1.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 64;
        std::vector<double> f(n), mu(n);
        double wsum = 0.0;
        for (int k = 0; k < n; ++k) {
            f[k] = 1e-3 + (M - 1e-3) * uni(rng);
            mu[k] = 1e-6 + uni(rng);
            wsum += mu[k];
        }
        for (auto& w : mu) w /= wsum;
        const NashGap gap = nash_gap(f, mu, M);
        max_excess = std::max(max_excess, gap.lhs - gap.rhs);
    }
    VerifierEntry e = make_bound_entry("nash_inequality_excess", max_excess, 1e-12, 0.0, 0.0,
                                       "1000 randomized samples, M=2, seed=" +
                                           std::to_string(seed));
    return e;
}

VerifierEntry poincare_entry(const Grid& g, const CutoffPair& zeta, double R, double z0) {
    const double k = 2.0 * kPi / g.z_len;
    ScalarField psi = ScalarField::from_function(
        g, Parity::even, [k](double, double z) { return std::sin(k * z); });
    const double ratio = weighted_poincare_ratio(psi, zeta, R, z0);
    std::ostringstream cfg;
    cfg << "psi=sin(2 pi z / L), R=" << R;
    VerifierEntry e = make_bound_entry("weighted_poincare_ratio", ratio, 1e300, 0.0, R, cfg.str());
    return e;
}

VerifierEntry skipped_entry(const std::string& name, const std::string& reason) {
    VerifierEntry e;
    e.name = name;
    e.verdict = VerifierEntry::Verdict::vacuous;
    e.config = "skipped: " + reason;
    return e;
}

void append_gamma_checks(VerifierReport& rep, const ScalarTrajectory& traj,
                         const MaxPrincipleStats& mp, const RunConfig& rc,
                         const std::string& prefix) {
    const Grid& g = traj.snapshot(0).grid();
    const Anchor anchor{rc.anchor_z, traj.t_back()};
    const DyadicScaleSet scales = make_dyadic_scales(rc.scales_r0, rc.scales_levels);
    validate_scales(scales, g);

    {
        VerifierEntry e = make_bound_entry(prefix + "max_principle_sup", mp.sup_excess, 1e-8, 0.0,
                                           0.0, "sup Gamma(t) - sup Gamma(0)");
        rep.add(e);
        e = make_bound_entry(prefix + "max_principle_inf", mp.inf_excess, 1e-8, 0.0, 0.0,
                             "inf Gamma(0) - inf Gamma(t)");
        rep.add(e);
    }

    // cylinder checks carry coverage/cadence preconditions; an artifact that
    // cannot satisfy them yields a skipped (vacuous) entry instead of a crash
    try {
        const double ratio = mean_value_ratio(traj, scales.r0, rc.mean_value_p, anchor);
        std::ostringstream cfg;
        cfg << "p=" << rc.mean_value_p << ", R=" << scales.r0;
        rep.add(make_bound_entry(prefix + "mean_value_ratio", ratio, 1e300, 0.0, scales.r0,
                                 cfg.str()));
    } catch (const std::exception& ex) {
        rep.add(skipped_entry(prefix + "mean_value_ratio", ex.what()));
    }

    try {
        for (auto& e : oscillation_decay_check(traj, scales, rc.verifier_delta, anchor)) {
            e.name = prefix + e.name;
            rep.add(std::move(e));
        }
    } catch (const std::exception& ex) {
        rep.add(skipped_entry(prefix + "oscillation_decay", ex.what()));
    }

    // lower bound on the paper-side normalization, when the data oscillates
    try {
        const OscillationProfile prof = oscillation_profile(traj, scales, anchor.z0, anchor.t0);
        if (!prof.entries.empty() && prof.entries.front().J > 0.0) {
            double a = 0.0;
            const ScalarTrajectory phi = normalize_to_phi(traj, scales.r0, anchor, &a);
            BlowdownConstants consts;
            consts.c0 = rc.verifier_c0;
            consts.delta = rc.verifier_delta;
            VerifierEntry e = lower_bound_check(phi, consts, scales.r0, anchor);
            e.name = prefix + e.name;
            e.config += ", phi_axis_level=" + std::to_string(a);
            rep.add(e);
        }
    } catch (const std::exception& ex) {
        rep.add(skipped_entry(prefix + "lower_bound_infimum", ex.what()));
    }
}

DriftDecomposition build_drift(const RunConfig& rc, const Grid& g) {
    return rc.drift.build(g);
}

// --- suite of admissible drifts ---------------------------------------------

struct SuiteCase {
    std::string name;
    DriftSpec drift;
};

std::vector<SuiteCase> suite_cases() {
    std::vector<SuiteCase> cases;
    cases.push_back({"no_drift", {}});
    {
        DriftSpec d;
        d.b3 = DriftSpec::B3Scaled{1.0};
        cases.push_back({"b3_c1", d});
    }
    {
        DriftSpec d;
        d.b3 = DriftSpec::B3Scaled{2.5};
        cases.push_back({"b3_c2p5", d});
    }
    {
        DriftSpec d;
        d.b2 = DriftSpec::B2Stream{0.5, 1};
        cases.push_back({"b2_a0p5", d});
    }
    {
        DriftSpec d;
        d.b2 = DriftSpec::B2Stream{1.0, 2};
        cases.push_back({"b2_a1", d});
    }
    {
        DriftSpec d;
        d.b1 = DriftSpec::B1Shell{2.0, 0.25, 0.5};
        cases.push_back({"b1_shell", d});
    }
    {
        DriftSpec d;
        d.b1 = DriftSpec::B1Shell{1.0, 0.25, 0.5};
        d.b2 = DriftSpec::B2Stream{0.25, 1};
        d.b3 = DriftSpec::B3Scaled{0.5};
        cases.push_back({"composite", d});
    }
    return cases;
}

} // namespace

RunOutput execute_run(const RunConfig& rc) {
    RunOutput out;
    out.dir = rc.output_dir;
    fs::create_directories(fs::path(rc.output_dir) / "snapshots");

    {
        std::ofstream os(fs::path(rc.output_dir) / "config.txt");
        os << rc.canonical_text;
    }

    DiagnosticsReport& diag = out.diagnostics;
    diag.config_hash_hex = hash_hex(rc.config_hash);
    diag.grid_desc = grid_desc(rc.grid);
    diag.anchor_z = rc.anchor_z;

    VerifierReport& verifier = out.verifier;
    const bool want_norms = std::count(rc.diagnostics.begin(), rc.diagnostics.end(), "norms") > 0;
    const bool want_osc =
        std::count(rc.diagnostics.begin(), rc.diagnostics.end(), "oscillation") > 0;
    const bool want_verifier =
        std::count(rc.diagnostics.begin(), rc.diagnostics.end(), "verifier") > 0;
    const bool want_liouville =
        std::count(rc.diagnostics.begin(), rc.diagnostics.end(), "liouville") > 0;

    std::vector<std::string> files = {"config.txt"};
    std::vector<double> snap_times;

    const DyadicScaleSet scales = make_dyadic_scales(rc.scales_r0, rc.scales_levels);

    if (rc.solver == RunConfig::SolverKind::gamma) {
        const DriftDecomposition drift = build_drift(rc, rc.grid);
        ScalarField ic = rc.initial_file.empty()
                             ? make_gamma_initial(rc.initial_preset, rc.grid, rc.initial_params)
                             : read_scalar_snapshot(rc.initial_file);
        if (!ic.grid().same_layout(rc.grid))
            throw std::runtime_error("initial snapshot grid does not match [grid]");
        GammaState state;
        state.gamma = std::move(ic);
        state.drift = std::make_shared<const DriftDecomposition>(drift);

        GammaRunConfig grc;
        grc.end_time = rc.end_time;
        grc.dt = rc.dt;
        grc.cfl = rc.cfl;
        grc.snapshot_dt = rc.snapshot_dt;
        grc.outer_bc = preset_outer_bc(rc.initial_preset, rc.outer_bc);
        const GammaRunResult run = run_gamma(state, grc);
        out.gamma_stats = run.stats;

        write_gamma_step_csv((fs::path(rc.output_dir) / "steps.csv").string(), run.stats);
        files.push_back("steps.csv");
        for (std::size_t k = 0; k < run.trajectory.size(); ++k) {
            const std::string name = snap_name(k);
            write_scalar_snapshot((fs::path(rc.output_dir) / "snapshots" / name).string(),
                                  run.trajectory.snapshot(k));
            files.push_back("snapshots/" + name);
            snap_times.push_back(run.trajectory.time(k));
        }
        write_snapshot_index((fs::path(rc.output_dir) / "snapshots" / "index.csv").string(),
                             snap_times);
        files.push_back("snapshots/index.csv");

        diag.anchor_t = run.trajectory.t_back();
        if (want_norms) {
            diag.enorm = e_norm(drift, scales, rc.anchor_z);
            diag.has_enorm = true;
        }
        if (want_osc) {
            validate_scales(scales, rc.grid);
            diag.profile =
                oscillation_profile(run.trajectory, scales, rc.anchor_z, run.trajectory.t_back());
            diag.has_profile = true;
            try {
                diag.fit = holder_fit(diag.profile);
                diag.has_fit = true;
            } catch (const std::exception&) {
                diag.has_fit = false; // under-resolved scales carry no slope
            }
        }
        if (want_verifier) {
            append_gamma_checks(verifier, run.trajectory, max_principle_from_stats(run.stats), rc,
                                "");
            verifier.add(nash_property_entry(rc.seed));
            verifier.add(poincare_entry(rc.grid, CutoffPair::unit_normalized(), rc.scales_r0,
                                        rc.anchor_z));
            out.has_verifier = true;
        }
    } else if (rc.solver == RunConfig::SolverKind::ns) {
        NSState state;
        if (rc.initial_file.empty()) {
            state = make_ns_initial(rc.initial_preset, rc.grid, rc.initial_params);
        } else {
            state.velocity = read_vector_snapshot(rc.initial_file);
            state.pressure = ScalarField(rc.grid, Parity::even);
            if (!state.velocity.grid().same_layout(rc.grid))
                throw std::runtime_error("initial snapshot grid does not match [grid]");
        }
        NSRunConfig nrc;
        nrc.end_time = rc.end_time;
        nrc.dt = rc.dt;
        nrc.cfl = rc.cfl;
        nrc.snapshot_dt = rc.snapshot_dt;
        nrc.options.outer_bc = preset_outer_bc(rc.initial_preset, rc.outer_bc);
        const NSRunResult run = run_ns(state, nrc);
        out.ns_stats = run.stats;

        write_ns_step_csv((fs::path(rc.output_dir) / "steps.csv").string(), run.stats);
        files.push_back("steps.csv");
        for (std::size_t k = 0; k < run.trajectory.size(); ++k) {
            const std::string name = snap_name(k);
            write_vector_snapshot((fs::path(rc.output_dir) / "snapshots" / name).string(),
                                  run.trajectory.snapshot(k));
            files.push_back("snapshots/" + name);
            snap_times.push_back(run.trajectory.time(k));
        }
        write_snapshot_index((fs::path(rc.output_dir) / "snapshots" / "index.csv").string(),
                             snap_times);
        files.push_back("snapshots/index.csv");

        diag.anchor_t = run.trajectory.t_back();

        // Gamma trajectory derived from the swirl
        ScalarTrajectory gtraj;
        for (std::size_t k = 0; k < run.trajectory.size(); ++k) {
            NSState s;
            s.velocity = run.trajectory.snapshot(k);
            gtraj.append(run.trajectory.time(k), compute_gamma(s));
        }

        if (want_norms) {
            // attribute the full b to the energy part, the stream to BMO
            NSState final_state;
            final_state.velocity = run.trajectory.snapshot(run.trajectory.size() - 1);
            final_state.pressure = ScalarField(rc.grid, Parity::even);
            const VectorFieldCyl b = compute_b(final_state);
            diag.enorm.hse = hollowed_scaled_energy(b, scales, rc.anchor_z);
            diag.enorm.bmo = bmo_seminorm(compute_stream(final_state));
            diag.enorm.sup_rb3 = 0.0;
            diag.enorm.total = diag.enorm.hse + diag.enorm.bmo;
            diag.has_enorm = true;
        }
        if (want_osc) {
            validate_scales(scales, rc.grid);
            diag.profile = oscillation_profile(gtraj, scales, rc.anchor_z, gtraj.t_back());
            diag.has_profile = true;
            try {
                diag.fit = holder_fit(diag.profile);
                diag.has_fit = true;
            } catch (const std::exception&) {
                diag.has_fit = false;
            }
        }
        if (want_verifier) {
            append_gamma_checks(verifier, gtraj, max_principle_from_snapshots(gtraj), rc, "");
            verifier.add(nash_property_entry(rc.seed));
            out.has_verifier = true;
        }
        if (want_liouville) {
            LiouvilleSection& l = diag.liouville;
            l.present = true;
            auto src = std::make_shared<const VectorTrajectory>(run.trajectory);
            const auto candidates = select_candidates(*src, rc.gamma_min);
            l.candidates = candidates;
            if (!candidates.empty()) {
                const BlowupCandidate c = candidates.back();
                l.rk_qk = c.r_k * c.Q_k;
                l.case_label = l.rk_qk <= rc.case_threshold ? "case1" : "case2";

                const Grid& g = rc.grid;
                const double xi_src = std::min(0.5 * (g.r_max - c.r_k), 0.25 * g.r_max);
                const double zeta_src = 0.25 * g.z_len;
                const Grid target = make_grid(8, 8, std::max(c.Q_k * xi_src, 1e-6),
                                              std::max(2.0 * c.Q_k * zeta_src, 1e-6));
                const double window =
                    std::max(c.Q_k * c.Q_k * (c.t_k - src->t_front()), 1e-12);
                const RescaledTrajectory resc = rescale(src, c, target, window);

                const double gamma_bound = compute_gamma({run.trajectory.snapshot(0),
                                                          ScalarField(g, Parity::even), 0.0})
                                               .max_abs();
                const VerifierEntry swirl = swirl_residual(resc, gamma_bound);
                l.swirl_sup = swirl.lhs;
                l.swirl_bound = swirl.rhs;
                l.planar = planar_residual(resc);
                l.constancy = constancy_residual(resc);
            } else {
                l.case_label = "none";
            }
            NSState final_state;
            final_state.velocity = run.trajectory.snapshot(run.trajectory.size() - 1);
            final_state.pressure = ScalarField(rc.grid, Parity::even);
            const ScalarField B = compute_stream(final_state);
            l.mean_value_defect = harmonic_mean_value_check(B, rc.anchor_z).max_defect;
        }
    } else {
        // verify_suite: the admissible-drift battery on the bump data set
        double suite_mvr = 0.0;
        double suite_osc_ratio = 0.0;
        double suite_enorm_max = 0.0;
        const auto cases = suite_cases();
        GammaRunResult last_run;
        for (const auto& sc : cases) {
            RunConfig case_rc = rc;
            case_rc.drift = sc.drift;
            const DriftDecomposition drift = build_drift(case_rc, rc.grid);
            const ENormReport en = e_norm(drift, scales, rc.anchor_z);
            suite_enorm_max = std::max(suite_enorm_max, en.total);
            verifier.add(make_bound_entry(sc.name + ".e_norm_admissible", en.total, 10.0, 0.0,
                                          scales.r0,
                                          "HSE=" + std::to_string(en.hse) +
                                              ", BMO=" + std::to_string(en.bmo) +
                                              ", sup_rb3=" + std::to_string(en.sup_rb3)));

            GammaState state;
            state.gamma = make_gamma_initial(rc.initial_preset, rc.grid, rc.initial_params);
            state.drift = std::make_shared<const DriftDecomposition>(drift);
            GammaRunConfig grc;
            grc.end_time = rc.end_time;
            grc.dt = rc.dt;
            grc.cfl = rc.cfl;
            grc.snapshot_dt = rc.snapshot_dt;
            grc.outer_bc = OuterBc::dirichlet_zero;
            const GammaRunResult run = run_gamma(state, grc);

            VerifierReport case_rep;
            append_gamma_checks(case_rep, run.trajectory, max_principle_from_stats(run.stats),
                                case_rc, sc.name + ".");
            for (auto& e : case_rep.entries) {
                if (e.name == sc.name + ".mean_value_ratio") suite_mvr = std::max(suite_mvr, e.lhs);
                if (e.name == sc.name + ".oscillation_decay_max_ratio")
                    suite_osc_ratio = std::max(suite_osc_ratio, e.lhs);
                verifier.add(std::move(e));
            }
            if (&sc == &cases.back()) last_run = run;
        }
        // persist the last case so the directory stays re-verifiable
        out.gamma_stats = last_run.stats;
        write_gamma_step_csv((fs::path(rc.output_dir) / "steps.csv").string(), last_run.stats);
        files.push_back("steps.csv");
        for (std::size_t k = 0; k < last_run.trajectory.size(); ++k) {
            const std::string name = snap_name(k);
            write_scalar_snapshot((fs::path(rc.output_dir) / "snapshots" / name).string(),
                                  last_run.trajectory.snapshot(k));
            files.push_back("snapshots/" + name);
            snap_times.push_back(last_run.trajectory.time(k));
        }
        write_snapshot_index((fs::path(rc.output_dir) / "snapshots" / "index.csv").string(),
                             snap_times);
        files.push_back("snapshots/index.csv");
        verifier.add(nash_property_entry(rc.seed));
        verifier.add(
            poincare_entry(rc.grid, CutoffPair::unit_normalized(), rc.scales_r0, rc.anchor_z));
        verifier.add(make_bound_entry("suite_mean_value_max", suite_mvr, 1e300, 0.0, scales.r0,
                                      "max over admissible-drift suite"));
        {
            VerifierEntry e = make_bound_entry("suite_oscillation_max_ratio", suite_osc_ratio,
                                               1.0, -1e-9, scales.r0,
                                               "eta=" + std::to_string(1.0 - suite_osc_ratio));
            verifier.add(e);
        }
        out.has_verifier = true;
        diag.extras.emplace_back("cases", static_cast<double>(cases.size()));
        diag.extras.emplace_back("max_e_norm", suite_enorm_max);
        diag.extras.emplace_back("max_mean_value_ratio", suite_mvr);
        diag.extras.emplace_back("max_oscillation_ratio", suite_osc_ratio);
        diag.extras.emplace_back("oscillation_eta", 1.0 - suite_osc_ratio);
        diag.anchor_t = rc.end_time;
    }

    write_diagnostics_json((fs::path(rc.output_dir) / "diagnostics.json").string(), diag);
    files.push_back("diagnostics.json");
    write_diagnostics_csv((fs::path(rc.output_dir) / "diagnostics.csv").string(), diag);
    files.push_back("diagnostics.csv");
    if (out.has_verifier) {
        write_verifier_json((fs::path(rc.output_dir) / "verifier.json").string(), verifier);
        files.push_back("verifier.json");
    }

    out.manifest.config_hash_hex = hash_hex(rc.config_hash);
    out.manifest.created_at = now_iso(rc.reproducible);
    out.manifest.files = files;
    out.manifest.files.push_back("manifest.json");
    write_manifest_json((fs::path(rc.output_dir) / "manifest.json").string(), out.manifest);
    return out;
}

VerifierReport execute_verify(const std::string& run_dir) {
    const fs::path dir(run_dir);
    if (!fs::exists(dir / "config.txt"))
        throw MissingArtifact("missing " + (dir / "config.txt").string());
    const Config cfg = Config::parse_file((dir / "config.txt").string());
    RunConfig rc = RunConfig::from_config(cfg);

    const fs::path index = dir / "snapshots" / "index.csv";
    if (!fs::exists(index)) throw MissingArtifact("missing " + index.string());

    std::ifstream is(index);
    std::string line;
    std::getline(is, line); // header
    std::vector<std::pair<double, std::string>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        std::getline(ls, tok, ',');
        const double t = std::stod(tok);
        std::string file;
        std::getline(ls, file, ',');
        rows.emplace_back(t, file);
    }
    if (rows.empty()) throw MissingArtifact("snapshot index is empty in " + run_dir);

    ScalarTrajectory gtraj;
    for (const auto& [t, file] : rows) {
        const fs::path snap = dir / "snapshots" / file;
        if (!fs::exists(snap)) throw MissingArtifact("missing snapshot " + snap.string());
        if (rc.solver == RunConfig::SolverKind::ns) {
            NSState s;
            s.velocity = read_vector_snapshot(snap.string());
            gtraj.append(t, compute_gamma(s));
        } else {
            gtraj.append(t, read_scalar_snapshot(snap.string()));
        }
    }

    VerifierReport rep;
    append_gamma_checks(rep, gtraj, max_principle_from_snapshots(gtraj), rc, "");
    rep.add(nash_property_entry(rc.seed));
    write_verifier_json((dir / "verifier.json").string(), rep);
    return rep;
}

DiagnosticsReport diagnostics_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    DiagnosticsReport rep;
    if (j.contains("hse")) {
        rep.has_enorm = true;
        rep.enorm.hse = j["hse"].get<double>();
        rep.enorm.bmo = j["bmo"].get<double>();
        rep.enorm.sup_rb3 = j["sup_rb3"].get<double>();
        rep.enorm.total = j["e_norm"].get<double>();
    }
    if (j.contains("per_scale")) {
        rep.has_profile = true;
        for (const auto& s : j["per_scale"]) {
            OscillationEntry e;
            e.R = s["R"].get<double>();
            e.m = s["m"].get<double>();
            e.M = s["M"].get<double>();
            e.J = s["J"].get<double>();
            rep.profile.entries.push_back(e);
        }
    }
    if (j.contains("alpha")) {
        rep.has_fit = true;
        rep.fit.alpha = j["alpha"].get<double>();
        rep.fit.residual = j.value("fit_residual", 0.0);
        // re-derive the intercept for plotting
        double sx = 0, sy = 0;
        int n = 0;
        for (const auto& e : rep.profile.entries)
            if (e.J > 0) {
                sx += std::log(e.R);
                sy += std::log(e.J);
                ++n;
            }
        if (n > 0 && std::isfinite(rep.fit.alpha) && std::abs(rep.fit.alpha) < 1e100)
            rep.fit.log_c = (sy - rep.fit.alpha * sx) / n;
        else
            rep.has_fit = false;
    }
    if (j.contains("suite"))
        for (auto it = j["suite"].begin(); it != j["suite"].end(); ++it)
            rep.extras.emplace_back(it.key(), it.value().get<double>());
    if (j.contains("provenance")) {
        rep.config_hash_hex = j["provenance"].value("config_hash", "");
        rep.artifact_version = j["provenance"].value("artifact_version", "");
        rep.grid_desc = j["provenance"].value("grid", "");
        rep.anchor_z = j["provenance"].value("anchor_z", 0.0);
        rep.anchor_t = j["provenance"].value("anchor_t", 0.0);
    }
    return rep;
}

VerifierReport verifier_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    VerifierReport rep;
    for (const auto& ej : j["entries"]) {
        VerifierEntry e;
        e.name = ej["name"].get<std::string>();
        e.lhs = ej["lhs"].get<double>();
        e.rhs = ej["rhs"].get<double>();
        e.ratio = ej["ratio"].get<double>();
        e.slack = ej.value("slack", 0.0);
        e.scale = ej.value("scale", 0.0);
        e.config = ej.value("config", "");
        const std::string verdict = ej["pass"].get<std::string>();
        e.verdict = verdict == "pass" ? VerifierEntry::Verdict::pass
                    : verdict == "fail" ? VerifierEntry::Verdict::fail
                    : verdict == "hypothesis_failed" ? VerifierEntry::Verdict::hypothesis_failed
                                                     : VerifierEntry::Verdict::vacuous;
        rep.add(e);
    }
    return rep;
}

void render_report(const std::string& run_dir, const std::string& format) {
    if (format != "csv" && format != "json" && format != "svg")
        throw std::invalid_argument("unknown report format '" + format + "' (csv | json | svg)");
    const fs::path dir(run_dir);
    const fs::path diag_path = dir / "diagnostics.json";
    if (!fs::exists(diag_path)) throw MissingArtifact("missing " + diag_path.string());

    std::ifstream is(diag_path);
    std::stringstream buf;
    buf << is.rdbuf();
    const DiagnosticsReport rep = diagnostics_from_json_text(buf.str());

    bool reproducible = false;
    if (fs::exists(dir / "config.txt")) {
        const Config cfg = Config::parse_file((dir / "config.txt").string());
        reproducible = cfg.get_bool_or("run", "reproducible", false);
    }

    if (format == "csv") {
        write_diagnostics_csv((dir / "report_norms.csv").string(), rep);
        if (fs::exists(dir / "verifier.json")) {
            std::ifstream vis(dir / "verifier.json");
            std::stringstream vbuf;
            vbuf << vis.rdbuf();
            const VerifierReport vrep = verifier_from_json_text(vbuf.str());
            std::ofstream os(dir / "report_verifier.csv");
            os.precision(17);
            os << "name,lhs,rhs,ratio,verdict,scale\n";
            for (const auto& e : vrep.entries)
                os << e.name << ',' << e.lhs << ',' << e.rhs << ',' << e.ratio << ','
                   << verdict_name(e.verdict) << ',' << e.scale << '\n';
        }
    } else if (format == "json") {
        nlohmann::ordered_json j;
        j["diagnostics"] = nlohmann::ordered_json::parse(diagnostics_to_json(rep));
        if (fs::exists(dir / "verifier.json")) {
            std::ifstream vis(dir / "verifier.json");
            std::stringstream vbuf;
            vbuf << vis.rdbuf();
            j["verifier"] = nlohmann::ordered_json::parse(vbuf.str());
        }
        std::ofstream os(dir / "report.json");
        os << j.dump(2) << '\n';
    } else {
        write_oscillation_svg((dir / "report.svg").string(), rep, reproducible);
    }
}

} // namespace axilab
