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

#pragma once

// Command implementations behind the memcert binary. Kept in the library so
// the exit-code and output contracts are testable without spawning
// processes. Exit code 0 means success, 2 means invalid data (missing files,
// schema violations, zero conclusive mass, malformed ranges). Warnings go
// into the report payload, never into the exit code.

#include <cstdint>
#include <optional>
#include <string>

namespace memcert::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct CommandResult {
  int exit_code = 0;
  std::string output;  // stdout payload
  std::string error;   // stderr diagnostics, empty on success
};

struct CertifyOptions {
  std::optional<std::string> counts_in_path;
  std::string counts_out_path;
  int scenario = 2;
  std::string assume_a = "none";
  std::string assume_b_in = "none";
  std::string assume_b_out = "none";
};
CommandResult run_certify(const CertifyOptions& opt);

// Ranges are "lo:hi:n" with n lattice points (n = 1 pins lo). Only the
// deterministic scenario has a closed-form surface, so scenario must be 1.
struct GridOptions {
  std::string s_i_range;
  std::string s_o_range;
  int scenario = 1;
};
CommandResult run_grid(const GridOptions& opt);

struct SimulateOptions {
  std::string model_path;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string phase = "output";
};
CommandResult run_simulate(const SimulateOptions& opt);

// Worker cap for grid evaluation: MEMCERT_THREADS when set to a positive
// integer, otherwise the hardware concurrency (at least 1).
int parallel_threads();

}  // namespace memcert::cli
