#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "icct/config.hpp"
#include "icct/csv.hpp"
#include "icct/demo.hpp"
#include "icct/dimer.hpp"
#include "icct/fit.hpp"
#include "icct/heom.hpp"
#include "icct/icc.hpp"
#include "icct/model.hpp"
#include "icct/rates.hpp"
#include "icct/scan.hpp"
#include "icct/units.hpp"
#include "icct/walk.hpp"

namespace {

using namespace icct;

#ifndef ICCT_VERSION
#define ICCT_VERSION "0.0.0"
#endif

std::vector<int> parse_sites(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const int v = std::stoi(cell);
        if (v < 1) throw ConfigError("site numbers are 1-based: " + cell);
        out.push_back(v - 1);
    }
    return out;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

void write_bundle(const ResultBundle& bundle, const std::string& path) {
    if (path.empty())
        emit(bundle, std::cout);
    else {
        emit(bundle, path);
        std::cerr << "wrote " << path << "\n";
    }
}

ResultBundle base_bundle(const std::string& command) {
    ResultBundle b;
    b.add("tool", std::string("icct ") + ICCT_VERSION);
    b.add("command", command);
    return b;
}

struct IccArgs {
    std::string donor = "1,2";
    std::string acceptor = "3,4,5,6,7";
    std::string config;
    std::string output;
    double site8_energy = 0.0;
    bool with_site8 = false;
};

int run_icc(const IccArgs& args) {
    SiteHamiltonian h = args.config.empty()
                            ? (args.with_site8 ? fmo_hamiltonian8(args.site8_energy) : fmo_hamiltonian())
                            : read_config_file(args.config).system;
    ComplexPartition part{parse_sites(args.donor), parse_sites(args.acceptor)};
    const IccDecomposition icc = icc_decompose(h, part);

    ResultBundle bundle = base_bundle("icc");
    bundle.add("donor_sites", args.donor);
    bundle.add("acceptor_sites", args.acceptor);

    ResultTable channels{"channels", {"channel", "coupling_cm1"}, {}};
    for (int l = 0; l < icc.couplings.size(); ++l)
        channels.rows.push_back({static_cast<double>(l + 1), icc.couplings(l)});
    bundle.tables.push_back(std::move(channels));

    auto state_table = [&](const std::string& name, const Matrix& states, const std::vector<int>& sites) {
        ResultTable t{name, {"site"}, {}};
        for (int l = 0; l < states.cols(); ++l) t.columns.push_back("channel_" + std::to_string(l + 1));
        for (int i = 0; i < states.rows(); ++i) {
            std::vector<double> row{static_cast<double>(sites[i] + 1)};
            for (int l = 0; l < states.cols(); ++l) row.push_back(states(i, l));
            t.rows.push_back(std::move(row));
        }
        return t;
    };
    bundle.tables.push_back(state_table("donor_states", icc.donor_states, part.donor));
    bundle.tables.push_back(state_table("acceptor_states", icc.acceptor_states, part.acceptor));
    write_bundle(bundle, args.output);

    if (!args.output.empty())
        for (int l = 0; l < icc.couplings.size(); ++l) {
            int site = 0;
            icc.acceptor_states.col(l).cwiseAbs().maxCoeff(&site);
            const double w = icc.acceptor_states(site, l) * icc.acceptor_states(site, l);
            std::printf("channel %d: %.4g cm^-1, acceptor weight %.0f%% on site %d\n", l + 1,
                        icc.couplings(l), 100.0 * w, part.acceptor[site] + 1);
        }
    return 0;
}

struct DimerScanArgs {
    double theta_min = 0.02, theta_max = 1.55;
    double de_min = 10.0, de_max = 500.0;
    int steps = 20;
    double temp = 300.0;
    int init = 2;
    std::string output;
};

int run_dimer_scan(const DimerScanArgs& args) {
    const auto rows =
        advantage_scan(args.theta_min, args.theta_max, args.steps, args.de_min, args.de_max, args.steps,
                       args.temp, args.init);
    ResultBundle bundle = base_bundle("dimer-scan");
    bundle.add("temperature_K", args.temp);
    bundle.add("initial_site", static_cast<double>(args.init));
    ResultTable t{"advantage", {"theta_rad", "delta_e_cm1", "p_coherent", "p_thermal", "advantage"}, {}};
    for (const AdvantageRow& r : rows) t.rows.push_back({r.theta, r.delta_e, r.p_coh, r.p_th, r.advantage});
    bundle.tables.push_back(std::move(t));
    write_bundle(bundle, args.output);
    return 0;
}

struct PropagateArgs {
    std::string config;
    std::string out;
    double tfinal = 0.0;
    double dt = 0.0;
    int depth = -1;
    int matsubara = -1;
};

RunConfig apply_overrides(const PropagateArgs& args) {
    RunConfig cfg = read_config_file(args.config);
    if (args.tfinal > 0.0) cfg.t_final = args.tfinal;
    if (args.dt > 0.0) cfg.propagation.dt = args.dt;
    if (args.depth >= 0) cfg.propagation.depth = args.depth;
    if (args.matsubara >= 0) cfg.propagation.matsubara = args.matsubara;
    if (!args.out.empty()) cfg.output_path = args.out;
    return cfg;
}

int run_propagate(const PropagateArgs& args) {
    const RunConfig cfg = apply_overrides(args);
    const Hierarchy hier = build_hierarchy(cfg.system, cfg.bath, cfg.propagation);
    const int n = static_cast<int>(cfg.system.h.rows());
    const PropagationResult res =
        propagate(hier, DensityMatrix::site_state(n, cfg.initial_site), cfg.t_final);

    ResultBundle bundle = base_bundle("propagate");
    bundle.add("config", nlohmann::json::parse(serialize_config(cfg)).dump());
    bundle.add("ados", static_cast<double>(hier.n_ados));
    for (const std::string& w : res.warnings) bundle.add("warning", w);

    ResultTable pops{"populations", {"time_fs"}, {}};
    for (int s = 0; s < n; ++s) pops.columns.push_back("p_" + cfg.system.labels[s]);
    std::vector<std::vector<double>> site_pops;
    for (int s = 0; s < n; ++s) site_pops.push_back(res.population(s));
    for (size_t i = 0; i < res.times.size(); ++i) {
        std::vector<double> row{res.times[i]};
        for (int s = 0; s < n; ++s) row.push_back(site_pops[s][i]);
        pops.rows.push_back(std::move(row));
    }
    bundle.tables.push_back(std::move(pops));

    if (n >= 2) {
        const auto coh = exciton_coherence(res, cfg.system);
        ResultTable t{"exciton_coherence", {"time_fs", "re", "im", "abs"}, {}};
        for (size_t i = 0; i < res.times.size(); ++i)
            t.rows.push_back({res.times[i], coh[i].real(), coh[i].imag(), std::abs(coh[i])});
        bundle.tables.push_back(std::move(t));
    }
    write_bundle(bundle, cfg.output_path);
    return 0;
}

int run_verify(const PropagateArgs& args) {
    RunConfig cfg = apply_overrides(args);
    const int n = static_cast<int>(cfg.system.h.rows());
    const DensityMatrix initial = DensityMatrix::site_state(n, cfg.initial_site);

    const Hierarchy hier = build_hierarchy(cfg.system, cfg.bath, cfg.propagation);
    const PropagationResult base = propagate(hier, initial, cfg.t_final);

    bool ok = true;
    auto report = [&ok](const std::string& name, double value, double bound) {
        const bool pass = value <= bound;
        ok = ok && pass;
        std::printf("%-28s %11.3e  (bound %.1e)  %s\n", name.c_str(), value, bound, pass ? "ok" : "FAIL");
    };

    double trace_drift = 0.0, herm = 0.0;
    for (size_t i = 0; i < base.states.size(); ++i) {
        trace_drift = std::max(trace_drift, std::abs(base.states[i].trace().real() - 1.0));
        herm = std::max(herm, (base.states[i] - base.states[i].adjoint()).cwiseAbs().maxCoeff());
    }
    report("trace drift", trace_drift, 1e-8 * std::max(1.0, cfg.t_final / 1000.0));
    report("hermiticity defect", herm, 1e-8);

    HeomOptions halved = cfg.propagation;
    halved.dt *= 0.5;
    halved.output_stride *= 2;
    const PropagationResult fine = propagate(build_hierarchy(cfg.system, cfg.bath, halved), initial, cfg.t_final);
    report("step halving (final state)",
           (base.states.back() - fine.states.back()).cwiseAbs().maxCoeff(), 1e-6);

    HeomOptions deeper = cfg.propagation;
    deeper.depth += 2;
    const PropagationResult deep = propagate(build_hierarchy(cfg.system, cfg.bath, deeper), initial, cfg.t_final);
    double pop_diff = 0.0;
    for (size_t i = 0; i < base.states.size(); ++i)
        pop_diff = std::max(pop_diff, (base.states[i].diagonal().real() - deep.states[i].diagonal().real())
                                          .cwiseAbs()
                                          .maxCoeff());
    report("depth +2 (populations)", pop_diff, 1e-4);

    if (cfg.bath.reorganization == 0.0) {
        const PropagationResult exact = unitary_propagate(cfg.system, initial, cfg.t_final, base.dt_output);
        double diff = 0.0;
        for (size_t i = 0; i < base.states.size(); ++i)
            diff = std::max(diff, (base.states[i] - exact.states[i]).cwiseAbs().maxCoeff());
        report("dissipation-free vs unitary", diff, 1e-6);
    }
    if (!ok) throw Error("verification bounds exceeded");
    std::printf("all propagation checks passed\n");
    return 0;
}

struct ExtractArgs {
    ChainSpec chain;
    double lambda = 35.0, tau_c = 50.0, temp = 300.0, correlation = 0.0;
    ExtractionOptions options;
    std::string output;
};

int run_extract(const ExtractArgs& args) {
    DrudeBath bath{args.lambda, args.tau_c, args.temp};
    if (args.correlation != 0.0) {
        Matrix c(2, 2);
        c << 1.0, args.correlation, args.correlation, 1.0;
        bath.site_correlation = c;
    }
    const RateTable table = extract_rates(args.chain, bath, args.options);
    save_rate_table(table, args.output);
    std::printf("%-22s %12s %12s %14s\n", "channel", "probability", "mean_t_fs", "mean_t_sq_fs2");
    const char* names[kChannels] = {"left entry, right hop", "left entry, left hop",
                                    "right entry, right hop", "right entry, left hop"};
    for (int c = 0; c < kChannels; ++c)
        std::printf("%-22s %12.6f %12.2f %14.4g\n", names[c], table.probability[c], table.mean_time[c],
                    table.mean_time_sq[c]);
    std::printf("tail rates: %.4g fs^-1 (left entry), %.4g fs^-1 (right entry)\n", table.tail_rate[0],
                table.tail_rate[1]);
    std::printf("wrote %s\n", args.output.c_str());
    return 0;
}

struct WalkArgs {
    std::string table;
    WalkOptions options;
    std::string output;
    bool analytic_only = false;
};

int run_walk(const WalkArgs& args) {
    const RateTable table = load_rate_table(args.table);
    const RatchetMoments an = analytic_moments(table, args.options.t_total);
    std::printf("analytic: drift %.6g spacings/fs, diffusion %.6g spacings^2/fs\n", an.drift, an.diffusion);
    std::printf("          mean n(T) = %.4f, var n(T) = %.4f, delta_pi = %.4f\n", an.mean_n, an.var_n,
                an.delta_pi);
    if (args.analytic_only) return 0;

    const McWalk mc = monte_carlo_walk(table, args.options);
    std::printf("monte carlo (%lld trajectories): mean %.4f +- %.4f, var %.4f +- %.4f\n", mc.n_traj,
                mc.mean_n, mc.se_mean, mc.var_n, mc.se_var);
    std::printf("          skewness %.3f, excess kurtosis %.3f\n", mc.skewness, mc.excess_kurtosis);

    if (!args.output.empty()) {
        ResultBundle bundle = base_bundle("ratchet walk");
        bundle.add("table", args.table);
        bundle.add("n_traj", static_cast<double>(args.options.n_traj));
        bundle.add("t_total_fs", args.options.t_total);
        bundle.add("seed", static_cast<double>(args.options.seed));
        bundle.add("analytic_mean_n", an.mean_n);
        bundle.add("analytic_var_n", an.var_n);
        bundle.add("mc_mean_n", mc.mean_n);
        bundle.add("mc_se_mean", mc.se_mean);
        bundle.add("mc_var_n", mc.var_n);
        bundle.add("mc_se_var", mc.se_var);
        ResultTable hist{"histogram", {"position", "count"}, {}};
        for (const auto& [pos, count] : mc.histogram)
            hist.rows.push_back({static_cast<double>(pos), static_cast<double>(count)});
        bundle.tables.push_back(std::move(hist));
        write_bundle(bundle, args.output);
    }
    return 0;
}

struct ClassicalArgs {
    double delta_e = 0.0, temp = 300.0, p_intra = 0.5, rate = 1e-3;
    WalkOptions options;
};

int run_classical(const ClassicalArgs& args) {
    const ClassicalBaseline out =
        classical_baseline(args.delta_e, args.temp, args.p_intra, args.rate, args.options);
    std::printf("analytic drift %.3e spacings/fs (zero by detailed balance), diffusion %.6g\n",
                out.analytic.drift, out.analytic.diffusion);
    std::printf("monte carlo mean %.4f +- %.4f (|z| = %.2f), var %.4f +- %.4f\n", out.mc.mean_n,
                out.mc.se_mean, out.mc.se_mean > 0 ? std::abs(out.mc.mean_n) / out.mc.se_mean : 0.0,
                out.mc.var_n, out.mc.se_var);
    return 0;
}

struct ScanArgs {
    ScanRequest request;
    std::string correlation_times = "25,50,100,200";
    std::string correlations = "0.3,0.6,0.9";
    std::string output;
};

int run_scan(const ScanArgs& args) {
    ScanRequest request = args.request;
    request.correlation_times = parse_values(args.correlation_times);
    request.correlations = parse_values(args.correlations);
    const std::vector<ScanPoint> points = scan_coherence_vs_drift(request);

    ResultBundle bundle = base_bundle("ratchet scan");
    ResultTable t{"scan",
                  {"value", "coherence_time_fs", "drift_nm_per_ps", "diffusion_nm2_per_ps", "delta_pi",
                   "sigma_1ns_nm", "applicable"},
                  {}};
    t.columns.insert(t.columns.begin(), "parameter_is_correlation");
    std::vector<double> taus, drifts;
    for (const ScanPoint& p : points) {
        t.rows.push_back({p.parameter == "site_correlation" ? 1.0 : 0.0, p.value, p.coherence_time_fs,
                          p.drift_nm_per_ps, p.diffusion_nm2_per_ps, p.delta_pi, p.sigma_1ns_nm,
                          p.applicable ? 1.0 : 0.0});
        if (p.applicable) {
            taus.push_back(p.coherence_time_fs);
            drifts.push_back(p.drift_nm_per_ps);
        }
        std::printf("%-18s %7.3g: tau %8.4g fs, drift %9.4g nm/ps, sigma(1ns) %8.4g nm%s\n",
                    p.parameter.c_str(), p.value, p.coherence_time_fs, p.drift_nm_per_ps, p.sigma_1ns_nm,
                    p.applicable ? "" : "  [not applicable]");
    }
    bundle.tables.push_back(std::move(t));
    if (taus.size() >= 3)
        std::printf("Spearman rank correlation (coherence time vs drift): %.3f over %zu points\n",
                    spearman(taus, drifts), taus.size());
    if (!args.output.empty()) write_bundle(bundle, args.output);
    return 0;
}

struct DemoArgs {
    FmoDemoOptions options;
    std::string output;
};

int run_demo(const DemoArgs& args) {
    const FmoDemoResult r = fmo_demo(args.options);

    ResultBundle bundle = base_bundle("fmo-demo");
    bundle.add("coupling_ch1_cm1", r.icc.couplings(1));
    bundle.add("coupling_ch2_cm1", r.icc.couplings(0));
    bundle.add("corr_donor2_gain_acceptor2", r.corr_ch2);
    bundle.add("corr_donor2_gain_acceptor1", r.corr_ch1);
    bundle.add("rate_scale_ch2_fs", r.scale_ch2);
    bundle.add("ratio_avg_initial_1", r.ratio_avg_init1);
    bundle.add("ratio_avg_initial_2", r.ratio_avg_init2);
    bundle.add("thermal_ratio", r.thermal_ratio);

    ResultTable dyn{"dynamics",
                    {"time_fs", "p_donor_ch2", "p_acceptor_ch1", "p_acceptor_ch2", "gain_ch1", "gain_ch2"},
                    {}};
    for (size_t i = 0; i < r.times.size(); ++i)
        dyn.rows.push_back(
            {r.times[i], r.p_donor_ch2[i], r.p_acceptor_ch1[i], r.p_acceptor_ch2[i], r.gain_ch1[i],
             r.gain_ch2[i]});
    bundle.tables.push_back(std::move(dyn));

    ResultTable ratio{"dimer_ratio", {"time_fs", "initial_1", "initial_2"}, {}};
    for (size_t i = 0; i < r.times.size(); ++i)
        ratio.rows.push_back({r.times[i], r.ratio_init1[i], r.ratio_init2[i]});
    bundle.tables.push_back(std::move(ratio));
    write_bundle(bundle, args.output);

    if (!args.output.empty()) {
        std::printf("donor channel 2 vs acceptor-2 gain: corr %+.3f (expected > 0)\n", r.corr_ch2);
        std::printf("donor channel 2 vs acceptor-1 gain: corr %+.3f (expected < 0)\n", r.corr_ch1);
        std::printf("dimer ratio averages: initial 1 %.4f, initial 2 %.4f, thermal %.4f\n",
                    r.ratio_avg_init1, r.ratio_avg_init2, r.thermal_ratio);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"excitonic coherence transport toolkit"};
    app.set_version_flag("--version", ICCT_VERSION);
    app.require_subcommand(1);

    IccArgs icc_args;
    CLI::App* icc = app.add_subcommand("icc", "inter-complex coupling decomposition of a donor/acceptor split");
    icc->add_option("--donor", icc_args.donor, "donor sites, comma separated (1-based)");
    icc->add_option("--acceptor", icc_args.acceptor, "acceptor sites, comma separated (1-based)");
    icc->add_option("--config", icc_args.config, "use the system block of this config file");
    auto* s8 = icc->add_option("--site8-energy", icc_args.site8_energy,
                               "include the 8th pigment at this site energy (cm^-1)");
    icc->add_option("--output,-o", icc_args.output, "CSV output path (default stdout)");

    DimerScanArgs dimer_args;
    CLI::App* dimer = app.add_subcommand("dimer-scan", "coherent vs thermal site-2 probability over (theta, dE)");
    dimer->add_option("--theta-min", dimer_args.theta_min, "mixing angle start, rad");
    dimer->add_option("--theta-max", dimer_args.theta_max, "mixing angle end, rad");
    dimer->add_option("--de-min", dimer_args.de_min, "splitting start, cm^-1");
    dimer->add_option("--de-max", dimer_args.de_max, "splitting end, cm^-1");
    dimer->add_option("--steps", dimer_args.steps, "grid points per axis");
    dimer->add_option("--temp", dimer_args.temp, "temperature, K");
    dimer->add_option("--init", dimer_args.init, "initial site (1 or 2)");
    dimer->add_option("--output,-o", dimer_args.output, "CSV output path (default stdout)");

    PropagateArgs prop_args;
    CLI::App* prop = app.add_subcommand("propagate", "hierarchy propagation of a configured system");
    prop->add_option("--config", prop_args.config, "run configuration (JSON)")->required();
    prop->add_option("--tfinal", prop_args.tfinal, "override simulation length, fs");
    prop->add_option("--dt", prop_args.dt, "override integrator step, fs");
    prop->add_option("--depth", prop_args.depth, "override hierarchy depth");
    prop->add_option("--matsubara", prop_args.matsubara, "override Matsubara term count");
    prop->add_option("--out,-o", prop_args.out, "CSV output path (overrides config)");

    PropagateArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify-propagation", "convergence and invariant checks for a configured run (costs ~4 runs)");
    verify->add_option("--config", verify_args.config, "run configuration (JSON)")->required();
    verify->add_option("--tfinal", verify_args.tfinal, "override simulation length, fs");

    CLI::App* ratchet = app.add_subcommand("ratchet", "dimer-chain random-walk pipeline");
    ratchet->require_subcommand(1);

    ExtractArgs extract_args;
    CLI::App* extract = ratchet->add_subcommand("extract-rates", "first-jump waiting-time table from dynamics");
    extract->add_option("--coupling", extract_args.chain.coupling, "working inter-dimer coupling, cm^-1");
    extract->add_option("--probe-coupling", extract_args.chain.probe_coupling,
                        "inter-dimer coupling used in the simulation, cm^-1");
    extract->add_option("--site-gap", extract_args.chain.site_gap, "intra-dimer site energy gap, cm^-1");
    extract->add_option("--intra-coupling", extract_args.chain.intra_coupling, "intra-dimer coupling, cm^-1");
    extract->add_option("--lambda", extract_args.lambda, "bath reorganization energy, cm^-1");
    extract->add_option("--tau-c", extract_args.tau_c, "bath correlation time, fs");
    extract->add_option("--temp", extract_args.temp, "temperature, K");
    extract->add_option("--correlation", extract_args.correlation, "intra-dimer bath cross-correlation");
    extract->add_option("--t-sim", extract_args.options.t_sim, "simulated window, fs");
    extract->add_option("--n-dimers", extract_args.options.n_dimers, "probe chain length (odd)");
    extract->add_option("--depth", extract_args.options.heom.depth, "hierarchy depth");
    extract->add_option("--matsubara", extract_args.options.heom.matsubara, "Matsubara terms");
    extract->add_option("--window", extract_args.options.smooth_window, "differentiation window (odd)");
    extract->add_option("--output,-o", extract_args.output, "rate table path")->required();

    WalkArgs walk_args;
    CLI::App* walk = ratchet->add_subcommand("walk", "Monte Carlo walk against the analytic asymptotics");
    walk->add_option("--table", walk_args.table, "rate table path")->required();
    walk->add_option("--n-traj", walk_args.options.n_traj, "trajectory count");
    walk->add_option("--t-total", walk_args.options.t_total, "walk duration, fs");
    walk->add_option("--seed", walk_args.options.seed, "RNG seed");
    walk->add_option("--threads", walk_args.options.threads, "worker threads (0 = hardware)");
    walk->add_option("--initial", walk_args.options.initial_coin,
                     "entry side of the first dimer (+1 left, -1 right, 0 stationary draw)");
    walk->add_option("--output,-o", walk_args.output, "optional CSV with the position histogram");

    WalkArgs asym_args;
    asym_args.analytic_only = true;
    CLI::App* asym = ratchet->add_subcommand("asymptotics", "closed-form drift and variance of a rate table");
    asym->add_option("--table", asym_args.table, "rate table path")->required();
    asym->add_option("--t-total", asym_args.options.t_total, "horizon for (mean, var), fs");

    ClassicalArgs classical_args;
    CLI::App* classical = ratchet->add_subcommand("classical", "memoryless detailed-balance baseline walk");
    classical->add_option("--delta-e", classical_args.delta_e, "site energy gap, cm^-1");
    classical->add_option("--temp", classical_args.temp, "temperature, K");
    classical->add_option("--p-intra", classical_args.p_intra, "intra-dimer branch probability");
    classical->add_option("--rate", classical_args.rate, "uphill escape rate, fs^-1");
    classical->add_option("--n-traj", classical_args.options.n_traj, "trajectory count");
    classical->add_option("--t-total", classical_args.options.t_total, "walk duration, fs");
    classical->add_option("--seed", classical_args.options.seed, "RNG seed");

    ScanArgs scan_args;
    CLI::App* scan = ratchet->add_subcommand(
        "scan", "coherence lifetime vs transport across bath variants (hours at defaults)");
    scan->add_option("--correlation-times", scan_args.correlation_times, "tau_c values, fs, comma separated");
    scan->add_option("--correlations", scan_args.correlations, "intra-dimer correlations, comma separated");
    scan->add_option("--coupling", scan_args.request.chain.coupling, "working inter-dimer coupling, cm^-1");
    scan->add_option("--t-sim", scan_args.request.extraction.t_sim, "extraction window, fs");
    scan->add_option("--depth", scan_args.request.extraction.heom.depth, "hierarchy depth");
    scan->add_option("--walk-time", scan_args.request.walk_time, "asymptotics horizon, fs");
    scan->add_option("--output,-o", scan_args.output, "CSV output path");

    DemoArgs demo_args;
    CLI::App* demo = app.add_subcommand("fmo-demo", "seven-site pipeline: channel populations and gains");
    demo->add_option("--t-final", demo_args.options.t_final, "simulated window, fs");
    demo->add_option("--depth", demo_args.options.heom.depth, "hierarchy depth");
    demo->add_option("--matsubara", demo_args.options.heom.matsubara, "Matsubara terms");
    demo->add_option("--output,-o", demo_args.output, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (icc->parsed()) {
            icc_args.with_site8 = s8->count() > 0;
            return run_icc(icc_args);
        }
        if (dimer->parsed()) return run_dimer_scan(dimer_args);
        if (prop->parsed()) return run_propagate(prop_args);
        if (verify->parsed()) return run_verify(verify_args);
        if (ratchet->parsed()) {
            if (extract->parsed()) return run_extract(extract_args);
            if (walk->parsed()) return run_walk(walk_args);
            if (asym->parsed()) return run_walk(asym_args);
            if (classical->parsed()) return run_classical(classical_args);
            if (scan->parsed()) return run_scan(scan_args);
        }
        if (demo->parsed()) return run_demo(demo_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
