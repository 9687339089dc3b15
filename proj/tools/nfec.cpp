// SPDX-License-Identifier: Apache-2.0
//
// nfec - effective capacity analysis for joint near-field/far-field links
// Copyright (C) 2026 The nfec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nfec/nfec.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_config = 2;

struct Options {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<unsigned> threads;
    bool paper_literal = false;
    bool extended_ff_limit = false;
};

nfec::AppConfig resolve(const Options& o) {
    nfec::AppConfig cfg = o.config_path.empty() ? nfec::default_config() : nfec::load_config(o.config_path);
    if (o.seed) cfg.mc.seed = *o.seed;
    if (o.samples) cfg.mc.n_samples = *o.samples;
    if (o.threads) cfg.mc.threads = *o.threads;
    if (o.extended_ff_limit) cfg.system.ff_mgf_upper = nfec::FfUpperLimit::extended;
    nfec::validate(cfg.system);
    return cfg;
}

void emit(const Options& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw nfec::config_error("out", "cannot write '" + o.out_path + "'");
    out << text;
}

int run(const std::string& command, const Options& o) {
    const nfec::AppConfig cfg = resolve(o);
    if (command == "fig2") emit(o, nfec::to_csv(nfec::run_fig2(cfg, o.paper_literal)));
    else if (command == "fig3") emit(o, nfec::to_csv(nfec::run_fig3(cfg, o.paper_literal)));
    else if (command == "fig4") emit(o, nfec::to_csv(nfec::run_fig4(cfg, o.paper_literal)));
    else if (command == "fig5") emit(o, nfec::to_csv(nfec::run_fig5(cfg, o.paper_literal)));
    else if (command == "crlb") emit(o, nfec::to_csv(nfec::run_crlb(cfg)));
    else if (command == "ec") emit(o, nfec::run_ec(cfg, o.paper_literal).dump(2) + "\n");
    else if (command == "validate") {
        const nfec::ValidationReport report = nfec::run_validation(cfg, o.paper_literal);
        std::cout << nfec::format_report(report);
        if (!o.out_path.empty()) emit(o, nfec::report_json(report).dump(2) + "\n");
        return report.ok() ? exit_ok : exit_check_failed;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effective capacity of joint near-field/far-field links under ranging uncertainty"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out_path, "output file (default: stdout)");
        sub->add_option("--seed", o.seed, "Monte Carlo seed");
        sub->add_option("--samples", o.samples, "Monte Carlo slot count");
        sub->add_option("--threads", o.threads, "worker threads (0 = all cores); never changes output");
        sub->add_flag("--paper-literal", o.paper_literal, "use the printed state-probability and MGF forms");
        sub->add_flag("--extended-ff-limit", o.extended_ff_limit, "integrate FF MGFs to d + 10 sigma_d");
    };
    const std::pair<const char*, const char*> commands[] = {
        {"fig2", "regime error probabilities versus sigma_d (CSV)"},
        {"fig3", "EC versus d_max (CSV)"},
        {"fig4", "EC versus the Fraunhofer distance (CSV)"},
        {"fig5", "EC versus sigma_d (CSV)"},
        {"validate", "analytics versus Monte Carlo oracle suite"},
        {"crlb", "ToA ranging variance versus the bound (CSV)"},
        {"ec", "single-point EC with diagnostics (JSON)"},
    };
    for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, o);
    } catch (const nfec::config_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_check_failed;
    }
}
