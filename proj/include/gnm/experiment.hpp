// experiment.hpp — declarative experiment runner: scenario configs, witness
// trace sweeps over a time grid, non-Markovianity verdicts, backflow
// reports and CSV emission.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "gnm/evolutions.hpp"
#include "gnm/qbm.hpp"
#include "gnm/witnesses.hpp"

namespace gnm {

enum class Scenario {
    classical_noise_steering,
    classical_noise_entanglement,
    oscillating_noise,
    qbm_high_t,
    qbm_low_t,
    custom,
};

enum class StateKind { two_mode, three_mode, both };
enum class WitnessKind { steering_ab, entanglement_ppt };
enum class NoiseProfile { rational, rational_scaled, oscillating };

std::string to_string(Scenario s);
std::string to_string(StateKind k);
std::string to_string(WitnessKind w);
std::string to_string(NoiseProfile p);

struct ToleranceSet {
    double psd = kPsdTol;
    double cptp = kCptpTol;
    double cp = kCpTol;
    double backflow_rel = kBackflowRelTol;
    double quad_rel = 1e-8;
    double ode_rel = 1e-9;
    double cross = 1e-6;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::custom;
    StateKind state_kind = StateKind::both;
    double squeezing = 2.0;  // state.r

    NoiseProfile profile = NoiseProfile::rational;
    std::vector<double> eta0_values = {1.0};  // oscillating-profile intensities

    double t_max = 8.0;
    int samples = 600;

    std::vector<WitnessKind> witnesses;

    // quantum Brownian motion parameters (qbm scenarios only)
    std::vector<double> alpha_values;
    double omega0 = 7.0;
    double omega_c = 1.0;
    double ohmicity = 1.0;
    double temperature = 100.0;

    ToleranceSet tolerances;
    std::string output_dir = "out";
    int threads = 1;

    /// Parse a flat key = value config (TOML-compatible subset). A `scenario`
    /// key first applies that scenario's preset defaults; remaining keys
    /// override them. Collects every problem into one ValidationError.
    static ExperimentConfig from_text(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);

    /// Throws ValidationError listing all violations.
    void validate() const;

    /// Same checks as validate() but returns the list instead of throwing.
    std::vector<std::string> collect_violations() const;
};

/// One witness trace with its companion verdicts.
struct TraceResult {
    std::string name;  // deterministic, file-system safe
    WitnessKind witness;
    StateKind state;
    double sweep_value = 0.0;  // alpha or eta0 when sweeping, else 0
    bool swept = false;
    WitnessTrace trace;
    std::vector<char> markovian_flags;  // per sample
    std::vector<TimeInterval> nm_intervals;
    BackflowReport backflows;
    bool every_nm_interval_has_backflow = false;
    std::string summary;
};

struct ExperimentBundle {
    ExperimentConfig config;
    std::vector<double> grid;
    std::vector<TraceResult> traces;
};

/// Run the configured sweep. Deterministic for a given config, including
/// across thread counts.
ExperimentBundle run(const ExperimentConfig& config);

/// Fixed 12-decimal cell format used by the CSV contract.
std::string format_csv_value(double v);

/// CSV body for one trace: header `t,value,markovian,backflow`, one row per
/// grid sample, '\n' line endings.
std::string trace_csv(const TraceResult& result);

/// Write one CSV per trace into `dir` (created if missing). Returns the
/// paths written, in trace order.
std::vector<std::string> emit_csv(const ExperimentBundle& bundle, const std::string& dir);

/// Embedded figure presets (fig2a, fig2b, fig3a, fig3b, fig4, fig5); the
/// files under presets/ carry the same text.
const std::map<std::string, std::string>& figure_presets();

}  // namespace gnm
