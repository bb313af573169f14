// Copyright 2026 The memcert developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "memcert/cli.hpp"

namespace {

int emit(const memcert::cli::CommandResult& r) {
  if (!r.output.empty()) std::fwrite(r.output.data(), 1, r.output.size(), stdout);
  if (!r.error.empty()) std::fwrite(r.error.data(), 1, r.error.size(), stderr);
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certifies quantum-memory fidelity from Bell-test statistics"};
  app.set_version_flag("--version", memcert::cli::kToolVersion);
  app.require_subcommand(1);

  memcert::cli::CertifyOptions certify;
  std::string counts_in;
  CLI::App* cmd_certify =
      app.add_subcommand("certify", "Certify a memory from counts files");
  cmd_certify->add_option("--counts-in", counts_in,
                          "Input-phase counts JSON (scenarios 1 and 3)");
  cmd_certify
      ->add_option("--counts-out", certify.counts_out_path,
                   "Output-phase counts JSON")
      ->required();
  cmd_certify->add_option("--scenario", certify.scenario,
                          "Certification scenario: 1, 2 or 3");
  cmd_certify->add_option("--assume-a", certify.assume_a,
                          "Fair-sampling assumption for party A");
  cmd_certify->add_option("--assume-b-in", certify.assume_b_in,
                          "Fair-sampling assumption for B, input phase");
  cmd_certify->add_option("--assume-b-out", certify.assume_b_out,
                          "Fair-sampling assumption for B, output phase");

  memcert::cli::GridOptions grid;
  CLI::App* cmd_grid =
      app.add_subcommand("grid", "Export the bound surface as CSV");
  cmd_grid->add_option("--s-i", grid.s_i_range, "Input CHSH range lo:hi:n")
      ->required();
  cmd_grid->add_option("--s-o", grid.s_o_range, "Output CHSH range lo:hi:n")
      ->required();
  cmd_grid->add_option("--scenario", grid.scenario, "Scenario (only 1)");

  memcert::cli::SimulateOptions simulate;
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "Sample counts from a model file");
  cmd_simulate->add_option("--model", simulate.model_path, "Model JSON file")
      ->required();
  cmd_simulate->add_option("--shots", simulate.shots, "Shots per setting pair")
      ->required();
  cmd_simulate->add_option("--seed", simulate.seed, "Sampling seed");
  cmd_simulate->add_option("--phase", simulate.phase,
                           "Phase label for the output table");

  CLI11_PARSE(app, argc, argv);

  if (cmd_certify->parsed()) {
    if (!counts_in.empty()) certify.counts_in_path = counts_in;
    return emit(memcert::cli::run_certify(certify));
  }
  if (cmd_grid->parsed()) return emit(memcert::cli::run_grid(grid));
  return emit(memcert::cli::run_simulate(simulate));
}
