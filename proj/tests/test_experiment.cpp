#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gnm/experiment.hpp"

using namespace gnm;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("full key set") {
        const ExperimentConfig c = ExperimentConfig::from_text(R"(
# comment
scenario = "oscillating_noise"
state.kind = "two_mode"
state.r = 1.5
evolution.eta0 = [0.8, 2.0]
grid.t_max = 4.0
grid.samples = 100
witnesses = ["steering_AB", "entanglement_PPT"]
tolerances.cp = 1e-8
output.dir = "somewhere"
)");
        CHECK(c.scenario == Scenario::oscillating_noise);
        CHECK(c.state_kind == StateKind::two_mode);
        CHECK(c.squeezing == 1.5);
        REQUIRE(c.eta0_values.size() == 2);
        CHECK(c.eta0_values[1] == 2.0);
        CHECK(c.t_max == 4.0);
        CHECK(c.samples == 100);
        CHECK(c.witnesses.size() == 2);
        CHECK(c.tolerances.cp == 1e-8);
        CHECK(c.output_dir == "somewhere");
    }

    SUBCASE("scenario presets fill the defaults") {
        const ExperimentConfig c =
            ExperimentConfig::from_text("scenario = \"classical_noise_entanglement\"\n");
        CHECK(c.profile == NoiseProfile::rational_scaled);
        REQUIRE(c.witnesses.size() == 1);
        CHECK(c.witnesses[0] == WitnessKind::entanglement_ppt);
        CHECK(c.t_max == 8.0);
        CHECK(c.samples == 600);
    }

    SUBCASE("violations are collected exhaustively") {
        try {
            ExperimentConfig::from_text(R"(
scenario = "nope"
state.r = -1.0
grid.samples = 1
witnesses = []
unknown.key = 3
grid.t_max = [1, 2
)");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.violations.size() >= 5);
            const std::string all = e.what();
            CHECK(all.find("scenario") != std::string::npos);
            CHECK(all.find("state.r") != std::string::npos);
            CHECK(all.find("grid.samples") != std::string::npos);
            CHECK(all.find("witnesses") != std::string::npos);
            CHECK(all.find("unknown key") != std::string::npos);
            CHECK(all.find("unclosed array") != std::string::npos);
        }
    }

    SUBCASE("missing file is an IO error") {
        CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/path.toml"), IoError);
    }
}

TEST_CASE("figure presets") {
    const auto& presets = figure_presets();
    REQUIRE(presets.size() == 6);

    SUBCASE("every preset parses") {
        for (const auto& [name, text] : presets) {
            const ExperimentConfig c = ExperimentConfig::from_text(text);
            CHECK(c.samples == 600);
            CHECK(c.state_kind == StateKind::both);
            CHECK(c.squeezing == 2.0);
        }
        const ExperimentConfig f3b = ExperimentConfig::from_text(presets.at("fig3b"));
        REQUIRE(f3b.alpha_values.size() == 4);
        CHECK(f3b.alpha_values[2] == 0.595);
        CHECK(f3b.witnesses[0] == WitnessKind::entanglement_ppt);
        const ExperimentConfig f5 = ExperimentConfig::from_text(presets.at("fig5"));
        CHECK(f5.temperature == 0.5);
    }

    SUBCASE("repo preset files match the embedded text") {
        for (const auto& [name, text] : presets) {
            const std::string path = std::string(GNM_PRESET_DIR) + "/" + name + ".toml";
            CHECK(slurp(path) == text);
        }
    }
}

TEST_CASE("CSV cell format") {
    CHECK(format_csv_value(0.0) == "0.000000000000");
    CHECK(format_csv_value(2.0) == "2.000000000000");
    CHECK(format_csv_value(0.25) == "0.250000000000");
    CHECK(format_csv_value(-1.5) == "-1.500000000000");
}

TEST_CASE("experiment runs") {
    SUBCASE("separable input yields an all-zero trace with zero cells") {
        ExperimentConfig c = ExperimentConfig::from_text(R"(
scenario = "custom"
state.kind = "two_mode"
state.r = 0.0
evolution.profile = "rational"
grid.t_max = 1.0
grid.samples = 3
witnesses = ["steering_AB"]
)");
        const ExperimentBundle bundle = run(c);
        REQUIRE(bundle.traces.size() == 1);
        const std::string csv = trace_csv(bundle.traces[0]);
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "t,value,markovian,backflow");
        int rows = 0;
        while (std::getline(lines, line)) {
            CHECK(line.find(",0.000000000000,") != std::string::npos);
            ++rows;
        }
        CHECK(rows == 3);
    }

    SUBCASE("classical-noise steering reproduction at reduced resolution") {
        ExperimentConfig c =
            ExperimentConfig::from_text("scenario = \"classical_noise_steering\"\n");
        c.samples = 200;
        c.threads = 2;
        const ExperimentBundle bundle = run(c);
        REQUIRE(bundle.traces.size() == 2);
        const double step = 8.0 / 199.0;

        const TraceResult* two = nullptr;
        const TraceResult* three = nullptr;
        for (const auto& tr : bundle.traces)
            (tr.state == StateKind::two_mode ? two : three) = &tr;
        REQUIRE(two);
        REQUIRE(three);

        for (std::size_t i = 0; i < bundle.grid.size(); ++i)
            if (bundle.grid[i] >= 1.0) CHECK(two->trace.values[i] <= 1e-9);

        REQUIRE(three->backflows.intervals.size() == 1);
        CHECK(std::abs(three->backflows.intervals[0].start - 2.0) <= step + 1e-12);
        CHECK(three->every_nm_interval_has_backflow);
        CHECK_FALSE(two->every_nm_interval_has_backflow);
        CHECK(two->summary.find("every_nm_interval_has_backflow=no") != std::string::npos);
    }

    SUBCASE("determinism across thread counts") {
        ExperimentConfig c = ExperimentConfig::from_text(R"(
scenario = "oscillating_noise"
evolution.eta0 = [0.8, 2.0]
grid.samples = 120
)");
        c.threads = 1;
        const ExperimentBundle one = run(c);
        c.threads = 4;
        const ExperimentBundle four = run(c);
        REQUIRE(one.traces.size() == four.traces.size());
        for (std::size_t i = 0; i < one.traces.size(); ++i)
            CHECK(trace_csv(one.traces[i]) == trace_csv(four.traces[i]));
    }
}

TEST_CASE("CSV emission") {
    ExperimentConfig c = ExperimentConfig::from_text(R"(
scenario = "custom"
state.kind = "two_mode"
state.r = 1.0
evolution.profile = "rational"
grid.t_max = 2.0
grid.samples = 5
witnesses = ["steering_AB"]
)");
    const ExperimentBundle bundle = run(c);
    const auto dir = std::filesystem::temp_directory_path() / "gnm_csv_test";
    std::filesystem::remove_all(dir);
    const auto paths = emit_csv(bundle, dir.string());
    REQUIRE(paths.size() == 1);
    CHECK(slurp(paths[0]) == trace_csv(bundle.traces[0]));
    std::filesystem::remove_all(dir);

    SUBCASE("unwritable target raises IoError") {
        const auto file = std::filesystem::temp_directory_path() / "gnm_blocker";
        std::ofstream(file.string()) << "x";
        CHECK_THROWS_AS(emit_csv(bundle, (file / "sub").string()), IoError);
        std::filesystem::remove(file);
    }
}
