// Copyright 2026 The qhopfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qhopfield <subcommand> --config <path> [--out <dir>] [--seed <u64>] [--workers <n>]

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "qhopfield/config.hpp"
#include "qhopfield/errors.hpp"
#include "qhopfield/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative quantum Hopfield network experiments"};
  app.set_version_flag("--version", std::string(qhop::kVersion));
  app.require_subcommand(1, 1);
  Options opts;
  for (const auto& name : qhop::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->add_option("--config", opts.config, "JSON config file")->required();
    sub->add_option("--out", opts.out, "Output directory (overrides output_dir)");
    sub->add_option("--seed", opts.seed, "Master seed (overrides seed)");
    sub->add_option("--workers", opts.workers, "Worker threads (overrides workers)")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    qhop::ExperimentConfig cfg = qhop::parse_config(opts.config, name);
    if (opts.out) cfg.set("output_dir", *opts.out);
    if (opts.seed) cfg.set("seed", *opts.seed);
    if (opts.workers) cfg.set("workers", *opts.workers);
    qhop::run_experiment(cfg, std::cerr);
  } catch (const qhop::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qhop::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
