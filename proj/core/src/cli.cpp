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

#include "memcert/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "memcert/io.hpp"
#include "memcert/selftest.hpp"
#include "memcert/simulate.hpp"

namespace memcert::cli {

namespace {

CommandResult data_error(const std::string& message) {
  CommandResult r;
  r.exit_code = 2;
  r.error = message + "\n";
  return r;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;

  double at(int i) const {
    return n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
};

Range parse_range(const std::string& text, const char* flag) {
  const auto bad = [&]() {
    throw std::runtime_error(std::string("malformed range for ") + flag +
                             ": expected lo:hi:n, got \"" + text + "\"");
  };
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) bad();
  Range r;
  try {
    std::size_t used = 0;
    r.lo = std::stod(text.substr(0, c1), &used);
    if (used != c1) bad();
    const std::string mid = text.substr(c1 + 1, c2 - c1 - 1);
    r.hi = std::stod(mid, &used);
    if (used != mid.size()) bad();
    const std::string tail = text.substr(c2 + 1);
    r.n = std::stoi(tail, &used);
    if (used != tail.size()) bad();
  } catch (const std::logic_error&) {
    bad();
  }
  if (r.n < 1 || r.lo > r.hi) bad();
  return r;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

int parallel_threads() {
  const char* env = std::getenv("MEMCERT_THREADS");
  if (env != nullptr) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

CommandResult run_certify(const CertifyOptions& opt) {
  try {
    CertifyConfig config;
    if (opt.scenario < 1 || opt.scenario > 3)
      return data_error("scenario must be 1, 2 or 3");
    config.scenario = static_cast<Scenario>(opt.scenario);
    config.assume_a = io::parse_assumption(opt.assume_a);
    config.assume_b_in = io::parse_assumption(opt.assume_b_in);
    config.assume_b_out = io::parse_assumption(opt.assume_b_out);

    if (config.scenario != Scenario::s2 && !opt.counts_in_path)
      return data_error("scenario " + std::to_string(opt.scenario) +
                        " requires --counts-in");

    io::ReportDocument doc;
    doc.tool_version = kToolVersion;

    std::optional<CountsTable> counts_in;
    if (opt.counts_in_path) {
      const std::string bytes = io::read_file(*opt.counts_in_path);
      doc.input_hashes["counts_in"] = io::content_hash(bytes);
      counts_in = io::parse_counts(bytes);
    }
    const std::string bytes_out = io::read_file(opt.counts_out_path);
    doc.input_hashes["counts_out"] = io::content_hash(bytes_out);
    const CountsTable counts_out = io::parse_counts(bytes_out);

    doc.report = certify(counts_in, counts_out, config);

    CommandResult r;
    r.output = io::serialize_report(doc);
    return r;
  } catch (const std::exception& e) {
    return data_error(e.what());
  }
}

CommandResult run_grid(const GridOptions& opt) {
  try {
    if (opt.scenario != 1)
      return data_error("grid supports scenario 1 only");
    const Range ri = parse_range(opt.s_i_range, "--s-i");
    const Range ro = parse_range(opt.s_o_range, "--s-o");

    const int total = ri.n * ro.n;
    std::vector<std::string> rows(total);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    const auto worker = [&]() {
      for (int k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
        if (failed.load()) return;
        const int i = k / ro.n;
        const int j = k % ro.n;
        const double s_i = ri.at(i);
        const double s_o = ro.at(j);
        try {
          const double f_i = singlet_fidelity_bound(s_i);
          const double f_o = singlet_fidelity_bound(s_o);
          const bool below = f_o < 0.5;
          const double bound = scenario1_bound(f_i, f_o);
          rows[k] = fixed6(s_i) + "," + fixed6(s_o) + "," + fixed6(f_i) +
                    "," + fixed6(f_o) + "," + fixed6(bound) + "," +
                    (below ? "below_domain" : "");
        } catch (const std::exception& e) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          failed.store(true);
          failure = e.what();
        }
      }
    };

    const int n_threads = std::min(parallel_threads(), total);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failed.load()) return data_error(failure);

    std::ostringstream out;
    out << "s_i,s_o,f_i,f_o,bound,warning\n";
    for (const std::string& row : rows) out << row << "\n";
    CommandResult r;
    r.output = out.str();
    return r;
  } catch (const std::exception& e) {
    return data_error(e.what());
  }
}

CommandResult run_simulate(const SimulateOptions& opt) {
  try {
    if (opt.shots == 0) return data_error("--shots must be positive");
    Phase phase;
    if (opt.phase == "input") {
      phase = Phase::input;
    } else if (opt.phase == "output") {
      phase = Phase::output;
    } else {
      return data_error("--phase must be input or output, got \"" +
                        opt.phase + "\"");
    }

    const ExperimentModel model =
        io::parse_model(io::read_file(opt.model_path));
    CountsTable table = sample_counts(model, opt.shots, opt.seed);
    table.phase = phase;

    CommandResult r;
    r.output = io::serialize_counts(table);
    return r;
  } catch (const std::exception& e) {
    return data_error(e.what());
  }
}

}  // namespace memcert::cli
