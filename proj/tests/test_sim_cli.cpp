// SPDX-License-Identifier: Apache-2.0
//
// eiasim - ergodic interference alignment simulation library
// Copyright (C) 2026 the eiasim authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Distributed under the License on an "AS IS" BASIS, WITHOUT WARRANTIES OR
// CONDITIONS OF ANY KIND, either express or implied. See the License for the
// specific language governing permissions and limitations.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eia/sim_cli.hpp"

using namespace eia;

namespace {

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            lines.push_back(line);
        }
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    // A trailing comma means a final empty field.
    if (!line.empty() && line.back() == ',') {
        fields.push_back("");
    }
    return fields;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("scheme names round trip") {
    for (const Scheme s :
         {Scheme::kBaseline, Scheme::kDelayedCsit, Scheme::kDelayedTimeIndex,
          Scheme::kDelayedOutputFb, Scheme::kFormulas}) {
        const auto back = scheme_from_string(to_string(s));
        REQUIRE(back.has_value());
        CHECK(*back == s);
    }
    CHECK_FALSE(scheme_from_string("full_csit").has_value());
    CHECK_FALSE(scheme_from_string("").has_value());
}

TEST_CASE("run configuration rejects malformed requests") {
    RunConfig bad_k;
    bad_k.k_min = 2;
    bad_k.snr_db = {40.0};
    CHECK_THROWS_AS(bad_k.validate(), std::invalid_argument);

    RunConfig bad_range;
    bad_range.k_min = 5;
    bad_range.k_max = 4;
    bad_range.snr_db = {40.0};
    CHECK_THROWS_AS(bad_range.validate(), std::invalid_argument);

    RunConfig bad_episodes;
    bad_episodes.episodes = 0;
    bad_episodes.snr_db = {40.0};
    CHECK_THROWS_AS(bad_episodes.validate(), std::invalid_argument);

    RunConfig no_snr;
    CHECK_THROWS_AS(no_snr.validate(), std::invalid_argument);
    no_snr.noiseless = true;
    CHECK_NOTHROW(no_snr.validate());

    RunConfig formulas;
    formulas.scheme = Scheme::kFormulas;
    CHECK_NOTHROW(formulas.validate());
}

TEST_CASE("formula table pins the three-user row") {
    RunConfig config;
    config.scheme = Scheme::kFormulas;
    config.k_min = 3;
    config.k_max = 6;
    std::ostringstream out;
    run_scenario_to(config, out);
    const auto lines = data_lines(out.str());
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] ==
          "k,proposed,proposed_decimal,retro_csit,retro_csit_decimal,"
          "retro_outputfb,retro_outputfb_decimal,baseline,baseline_decimal");
    CHECK(lines[1] == "3,6/5,1.2,9/8,1.125,6/5,1.2,3/2,1.5");
    CHECK(lines[2] == "4,4/3,1.33333333333,16/15,1.06666666667,8/7,"
                      "1.14285714286,2,2");
}

TEST_CASE("scenario output is byte deterministic") {
    RunConfig config;
    config.scheme = Scheme::kDelayedTimeIndex;
    config.k_min = 3;
    config.k_max = 3;
    config.snr_db = {40.0, 60.0};
    config.episodes = 50;
    config.seed = 99;

    std::ostringstream a;
    std::ostringstream b;
    run_scenario_to(config, a);
    run_scenario_to(config, b);
    CHECK(a.str() == b.str());
    CHECK(!a.str().empty());

    const auto dir = std::filesystem::temp_directory_path();
    const auto path_a = dir / "eia_cli_test_a.csv";
    const auto path_b = dir / "eia_cli_test_b.csv";
    RunConfig file_config = config;
    file_config.output_path = path_a.string();
    CHECK(run_scenario(file_config) == 0);
    file_config.output_path = path_b.string();
    CHECK(run_scenario(file_config) == 0);
    CHECK(slurp(path_a) == slurp(path_b));
    CHECK(slurp(path_a) == a.str());
    std::filesystem::remove(path_a);
    std::filesystem::remove(path_b);
}

TEST_CASE("noiseless runs report vanishing decode error") {
    RunConfig config;
    config.scheme = Scheme::kDelayedOutputFb;
    config.k_min = 3;
    config.k_max = 4;
    config.episodes = 30;
    config.noiseless = true;
    config.seed = 7;
    std::ostringstream out;
    run_scenario_to(config, out);
    const auto lines = data_lines(out.str());
    REQUIRE(lines.size() == 3);  // header + one row per K
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        REQUIRE(fields.size() == 12);
        CHECK(fields[0] == "delayed_output_fb");
        CHECK(fields[3] == "30");                   // episodes completed
        CHECK(std::stod(fields[7]) < 1e-8);         // max decode error
        CHECK(fields[9] == (i == 1 ? "6/5" : "4/3"));  // ledger ratio
    }
}

TEST_CASE("noisy sweep books a slope near the ledger ratio") {
    RunConfig config;
    config.scheme = Scheme::kDelayedCsit;
    config.k_min = 3;
    config.k_max = 3;
    config.snr_db = {40.0, 60.0};
    config.episodes = 1000;
    config.seed = 12;
    std::ostringstream out;
    run_scenario_to(config, out);
    const auto lines = data_lines(out.str());
    REQUIRE(lines.size() == 4);  // header, two SNR rows, summary

    const auto row40 = split_fields(lines[1]);
    REQUIRE(row40.size() == 12);
    CHECK(row40[2] == "40");
    CHECK(std::stod(row40[6]) > 0.0);

    const auto summary = split_fields(lines[3]);
    REQUIRE(summary.size() == 12);
    CHECK(summary[2].empty());
    CHECK(summary[3] == "1000");
    REQUIRE(!summary[10].empty());
    const double slope = std::stod(summary[10]);
    CHECK(slope == doctest::Approx(1.2).epsilon(0.05));
    CHECK(std::stod(summary[11]) == doctest::Approx(1.2));
}

TEST_CASE("verification suite passes end to end") {
    std::ostringstream out;
    const int failures = run_verify(2026, out);
    CHECK(failures == 0);
    CHECK(out.str().find("[PASS]") != std::string::npos);
    CHECK(out.str().find("[FAIL]") == std::string::npos);
}
