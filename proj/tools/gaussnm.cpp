// gaussnm — experiment runner for Gaussian covariance-matrix evolutions and
// correlation-backflow witnesses.
//
// Subcommands:
//   run <config>        run a config file and write CSV traces
//   reproduce <figure>  run a built-in figure preset (fig2a .. fig5)
//   witness             one-shot witness evaluation for a state + channel
//   check               closed-form vs pipeline oracle equivalence sweep
//
// Exit codes: 0 success, 1 validation failure, 2 numerical failure, 3 IO.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "gnm/channels.hpp"
#include "gnm/experiment.hpp"
#include "gnm/oracles.hpp"
#include "gnm/symplectic.hpp"
#include "gnm/witnesses.hpp"

namespace {

struct CommonFlags {
    std::string out_dir;
    int grid_samples = 0;
    int threads = 0;
    std::vector<std::string> tol_overrides;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--out", flags.out_dir, "Output directory (overrides output.dir)");
    cmd->add_option("--grid", flags.grid_samples, "Number of grid samples (overrides grid.samples)");
    cmd->add_option("--threads", flags.threads, "Worker threads (default: hardware)");
    cmd->add_option("--tol-override", flags.tol_overrides,
                    "KEY=VAL tolerance override (e.g. cp=1e-8); repeatable");
}

void apply_flags(gnm::ExperimentConfig& config, const CommonFlags& flags) {
    if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
    if (flags.grid_samples > 0) config.samples = flags.grid_samples;
    config.threads = flags.threads > 0
                         ? flags.threads
                         : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::string> problems;
    for (const auto& kv : flags.tol_overrides) {
        const auto eq = kv.find('=');
        double value = 0.0;
        bool ok = eq != std::string::npos;
        if (ok) {
            try {
                std::size_t pos = 0;
                value = std::stod(kv.substr(eq + 1), &pos);
                ok = pos == kv.size() - eq - 1;
            } catch (...) {
                ok = false;
            }
        }
        if (!ok) {
            problems.push_back("--tol-override: expected KEY=VAL, got '" + kv + "'");
            continue;
        }
        std::string key = kv.substr(0, eq);
        if (key.rfind("tolerances.", 0) == 0) key = key.substr(11);
        auto& t = config.tolerances;
        if (key == "psd")
            t.psd = value;
        else if (key == "cptp")
            t.cptp = value;
        else if (key == "cp")
            t.cp = value;
        else if (key == "backflow_rel")
            t.backflow_rel = value;
        else if (key == "quad_rel")
            t.quad_rel = value;
        else if (key == "ode_rel")
            t.ode_rel = value;
        else if (key == "cross")
            t.cross = value;
        else
            problems.push_back("--tol-override: unknown tolerance '" + key + "'");
    }
    if (!problems.empty()) throw gnm::ValidationError(std::move(problems));
}

int run_bundle(gnm::ExperimentConfig config) {
    const gnm::ExperimentBundle bundle = gnm::run(config);
    const auto paths = gnm::emit_csv(bundle, config.output_dir);
    for (const auto& tr : bundle.traces) std::cout << tr.summary << "\n";
    for (const auto& p : paths) std::cout << "wrote " << p << "\n";
    return 0;
}

int cmd_witness(const std::string& state, double r, double tau, double eta) {
    using namespace gnm;
    const bool three = state == "three_mode";
    if (!three && state != "two_mode")
        throw ValidationError({"--state: must be two_mode or three_mode"});
    const CovarianceMatrix initial = three ? ghz_w_state(r) : two_mode_squeezed(r);
    const Bipartition part = three ? Bipartition{2, 1} : Bipartition{1, 1};
    const GaussianChannel ch = isotropic_channel(tau, eta);
    const CovarianceMatrix out = apply(embed_local(ch, initial.modes(), 0), initial);

    std::printf("state=%s r=%g channel=(tau=%g, eta=%g) on mode 0\n", state.c_str(), r, tau, eta);
    std::printf("steerability_A->B    = %.12g\n", steerability(out, part));
    std::printf("steerability_B->A    = %.12g\n",
                steerability(out, part, SteeringDirection::b_to_a));
    std::printf("entanglement_PPT     = %.12g\n", entanglement_ppt(out, part));
    std::printf("channel: cptp=%s gib=%s eb=%s\n", is_cptp(ch) ? "yes" : "no",
                is_gib(ch) ? "yes" : "no", is_eb(ch) ? "yes" : "no");
    return 0;
}

int cmd_check() {
    using namespace gnm;
    double worst = 0.0;
    for (double r = 0.25; r <= 3.0 + 1e-12; r += 0.25) {
        for (double eta = 0.0; eta <= 5.0 + 1e-12; eta += 0.25) {
            for (double tau = 0.25; tau <= 1.0 + 1e-12; tau += 0.25) {
                const double eta_eff = eta / (tau * tau);
                const GaussianChannel ch = isotropic_channel(tau, eta);

                const CovarianceMatrix two = apply(embed_local(ch, 2, 0), two_mode_squeezed(r));
                const double nu2 =
                    symplectic_eigenvalues(schur_complement(two, {1, 1}, SchurSide::of_b))[0];
                worst = std::max(worst, std::abs(nu2 - oracles::nu_minus_2mode(r, eta_eff)));

                const CovarianceMatrix three = apply(embed_local(ch, 3, 0), ghz_w_state(r));
                const double nu3 =
                    symplectic_eigenvalues(schur_complement(three, {2, 1}, SchurSide::of_b))[0];
                worst = std::max(worst, std::abs(nu3 - oracles::nu_minus_3mode(r, eta_eff)));
            }
        }
    }
    std::printf("oracle equivalence sweep: max |closed form - pipeline| = %.3e\n", worst);
    if (worst > 1e-9) {
        std::printf("FAIL (tolerance 1e-9)\n");
        return 2;
    }
    std::printf("OK (tolerance 1e-9)\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian evolutions, correlation witnesses and non-Markovianity backflows"};
    app.require_subcommand(1);

    std::string config_path;
    CommonFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment config file");
    run_cmd->add_option("config", config_path, "Config file (flat key = value)")->required();
    add_common_flags(run_cmd, run_flags);

    std::string figure;
    CommonFlags rep_flags;
    auto* rep_cmd = app.add_subcommand("reproduce", "Run a built-in figure preset");
    rep_cmd->add_option("figure", figure, "fig2a | fig2b | fig3a | fig3b | fig4 | fig5")
        ->required();
    add_common_flags(rep_cmd, rep_flags);

    std::string state = "two_mode";
    double r = 2.0, tau = 1.0, eta = 0.0;
    auto* wit_cmd = app.add_subcommand("witness", "One-shot state + channel evaluation");
    wit_cmd->add_option("--state", state, "two_mode | three_mode");
    wit_cmd->add_option("--r", r, "Squeezing parameter");
    wit_cmd->add_option("--tau", tau, "Channel transmission tau");
    wit_cmd->add_option("--eta", eta, "Channel noise eta");

    app.add_subcommand("check", "Closed-form vs pipeline oracle equivalence sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            gnm::ExperimentConfig config = gnm::ExperimentConfig::from_file(config_path);
            apply_flags(config, run_flags);
            return run_bundle(std::move(config));
        }
        if (rep_cmd->parsed()) {
            const auto& presets = gnm::figure_presets();
            const auto it = presets.find(figure);
            if (it == presets.end())
                throw gnm::ValidationError({"unknown figure '" + figure +
                                            "' (expected fig2a, fig2b, fig3a, fig3b, fig4, fig5)"});
            gnm::ExperimentConfig config = gnm::ExperimentConfig::from_text(it->second);
            apply_flags(config, rep_flags);
            return run_bundle(std::move(config));
        }
        if (wit_cmd->parsed()) return cmd_witness(state, r, tau, eta);
        return cmd_check();
    } catch (const gnm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gnm::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
