// Copyright 2026 The sideobs Authors.
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

// File formats.
//
//   graph JSON     {"n": int, "weights": [n*n reals, row-major]}
//   losses CSV     header arm_0,...,arm_{N-1}; one row per round
//   run config     JSON object, unknown fields rejected (see README)
//   trace.csv      round,arm,loss,cum_regret,Q,eta,gamma
//   aggregate.csv  config_key,rep,final_regret
//   alpha_scatter.csv  n,seed,alpha_star,eps_star
//
// Reals are written in shortest round-trip form, so reading a file back
// reproduces every value bit for bit.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sideobs/environment.hpp"
#include "sideobs/graph.hpp"
#include "sideobs/harness.hpp"

namespace sideobs {

std::string format_double(double value);

std::string graph_to_json(const ObservationGraph& g);
ObservationGraph graph_from_json(std::string_view text);
ObservationGraph load_graph(const std::string& path);
void save_graph(const std::string& path, const ObservationGraph& g);

void write_losses_csv(std::ostream& out, const LossSequence& losses);
LossSequence read_losses_csv(std::istream& in);
LossSequence load_losses(const std::string& path);
void save_losses(const std::string& path, const LossSequence& losses);

RunConfig config_from_json(std::string_view text);
RunConfig load_config(const std::string& path);
// Fully resolved config (defaults filled in); parses back to the same config.
std::string config_to_json(const RunConfig& cfg);

void write_trace_csv(std::ostream& out, const RegretTrace& trace);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateResult>& results);
void write_alpha_scatter_csv(std::ostream& out, const std::vector<AlphaScatterRow>& rows);

std::string alpha_star_to_json(const AlphaStarResult& result);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace sideobs
