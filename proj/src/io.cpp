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

#include "sideobs/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sideobs/error.hpp"

namespace sideobs {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& msg) { fail(ErrorCode::kValidation, msg); }

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) bad_config(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) bad_config("unknown field '" + key + "' in " + std::string(where));
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, std::string_view where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad_config("field '" + std::string(key) + "' in " + std::string(where) +
               " has the wrong type");
  }
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback,
                      std::string_view where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    bad_config("field '" + std::string(key) + "' in " + std::string(where) +
               " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

struct NamedRule {
  std::string_view name;
  GridRule rule;
};
constexpr std::array kGridRules{NamedRule{"inv_one_plus_d2", GridRule::kInvOnePlusD2},
                                NamedRule{"min_3_over_d2", GridRule::kMin3OverD2}};

std::string_view grid_rule_name(GridRule r) {
  for (const auto& e : kGridRules) {
    if (e.rule == r) return e.name;
  }
  return "?";
}

std::string_view spacing_name(GridSpacing s) {
  switch (s) {
    case GridSpacing::kDefault:
      return "default";
    case GridSpacing::kUnit:
      return "unit";
    case GridSpacing::kUnitSquare:
      return "unit_square";
  }
  return "?";
}

std::string_view noise_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::kUniformSymmetric:
      return "uniform_symmetric";
    case NoiseKind::kRademacherScaled:
      return "rademacher_scaled";
    case NoiseKind::kZero:
      return "zero";
  }
  return "?";
}

std::string_view estimator_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::kBasic:
      return "basic";
    case EstimatorKind::kTruncated:
      return "truncated";
    case EstimatorKind::kWeighted:
      return "weighted";
  }
  return "?";
}

std::string_view view_name(ObservationView v) {
  switch (v) {
    case ObservationView::kFull:
      return "full";
    case ObservationView::kBandit:
      return "bandit";
    case ObservationView::kBinarized:
      return "binarized";
  }
  return "?";
}

GraphSpec parse_graph(const json& j) {
  GraphSpec g;
  if (j.contains("file")) {
    reject_unknown(j, "graph", {"file"});
    g.kind = GraphSpec::Kind::kFile;
    g.path = get_or<std::string>(j, "file", "", "graph");
    return g;
  }
  const auto gen = get_or<std::string>(j, "generator", "grid", "graph");
  if (gen == "grid") {
    reject_unknown(j, "graph", {"generator", "k", "rule", "spacing"});
    g.kind = GraphSpec::Kind::kGrid;
    g.k = get_count(j, "k", 5, "graph");
    const auto rule = get_or<std::string>(j, "rule", "min_3_over_d2", "graph");
    bool found = false;
    for (const auto& e : kGridRules) {
      if (e.name == rule) {
        g.rule = e.rule;
        found = true;
      }
    }
    if (!found) bad_config("unknown grid rule '" + rule + "'");
    const auto spacing = get_or<std::string>(j, "spacing", "default", "graph");
    if (spacing == "default") {
      g.spacing = GridSpacing::kDefault;
    } else if (spacing == "unit") {
      g.spacing = GridSpacing::kUnit;
    } else if (spacing == "unit_square") {
      g.spacing = GridSpacing::kUnitSquare;
    } else {
      bad_config("unknown grid spacing '" + spacing + "'");
    }
  } else if (gen == "random_uniform") {
    reject_unknown(j, "graph", {"generator", "lo", "hi"});
    g.kind = GraphSpec::Kind::kRandomUniform;
    g.lo = get_or<double>(j, "lo", 0.0, "graph");
    g.hi = get_or<double>(j, "hi", 1.0, "graph");
  } else if (gen == "identity") {
    reject_unknown(j, "graph", {"generator"});
    g.kind = GraphSpec::Kind::kIdentity;
  } else {
    bad_config("unknown graph generator '" + gen + "'");
  }
  return g;
}

json graph_spec_json(const GraphSpec& g) {
  switch (g.kind) {
    case GraphSpec::Kind::kGrid:
      return {{"generator", "grid"},
              {"k", g.k},
              {"rule", grid_rule_name(g.rule)},
              {"spacing", spacing_name(g.spacing)}};
    case GraphSpec::Kind::kRandomUniform:
      return {{"generator", "random_uniform"}, {"lo", g.lo}, {"hi", g.hi}};
    case GraphSpec::Kind::kIdentity:
      return {{"generator", "identity"}};
    case GraphSpec::Kind::kFile:
      return {{"file", g.path}};
  }
  return {};
}

LossSpec parse_losses(const json& j) {
  LossSpec l;
  if (j.contains("file")) {
    reject_unknown(j, "losses", {"file"});
    l.kind = LossSpec::Kind::kFile;
    l.path = get_or<std::string>(j, "file", "", "losses");
    return l;
  }
  reject_unknown(j, "losses", {"generator", "walks", "sigma", "interleave"});
  const auto gen = get_or<std::string>(j, "generator", "random_walk", "losses");
  if (gen != "random_walk") bad_config("unknown loss generator '" + gen + "'");
  l.kind = LossSpec::Kind::kRandomWalk;
  l.walks = get_count(j, "walks", l.walks, "losses");
  l.sigma = get_or<double>(j, "sigma", l.sigma, "losses");
  const auto il = get_or<std::string>(j, "interleave",
                                      l.interleave == Interleave::kRotate ? "rotate" : "fixed",
                                      "losses");
  if (il == "rotate") {
    l.interleave = Interleave::kRotate;
  } else if (il == "fixed") {
    l.interleave = Interleave::kFixed;
  } else {
    bad_config("unknown interleave rule '" + il + "'");
  }
  return l;
}

json loss_spec_json(const LossSpec& l) {
  if (l.kind == LossSpec::Kind::kFile) return {{"file", l.path}};
  return {{"generator", "random_walk"},
          {"walks", l.walks},
          {"sigma", l.sigma},
          {"interleave", l.interleave == Interleave::kRotate ? "rotate" : "fixed"}};
}

NoiseModel parse_noise(const json& j) {
  reject_unknown(j, "noise", {"distribution", "R"});
  NoiseModel m;
  m.bound = get_or<double>(j, "R", 1.0, "noise");
  const auto d = get_or<std::string>(j, "distribution", "uniform_symmetric", "noise");
  if (d == "uniform_symmetric") {
    m.kind = NoiseKind::kUniformSymmetric;
  } else if (d == "rademacher_scaled") {
    m.kind = NoiseKind::kRademacherScaled;
  } else if (d == "zero") {
    m.kind = NoiseKind::kZero;
  } else {
    bad_config("unknown noise distribution '" + d + "'");
  }
  return m;
}

RateSchedule parse_rates(const json& j, double default_r) {
  reject_unknown(j, "policy.rates", {"mode", "eta", "gamma", "R"});
  const auto mode = get_or<std::string>(j, "mode", "adaptive", "policy.rates");
  const double r = get_or<double>(j, "R", default_r, "policy.rates");
  if (mode == "adaptive") {
    if (j.contains("eta") || j.contains("gamma")) {
      bad_config("adaptive rates do not take eta or gamma");
    }
    return RateSchedule::adaptive(r);
  }
  if (mode == "static") {
    if (!j.contains("eta")) bad_config("static rates need 'eta'");
    return RateSchedule::fixed(get_or<double>(j, "eta", 0.0, "policy.rates"),
                               get_or<double>(j, "gamma", 0.0, "policy.rates"), r);
  }
  bad_config("unknown rate mode '" + mode + "'");
}

PolicyConfig parse_policy(const json& j, double default_r) {
  reject_unknown(j, "policy",
                 {"algorithm", "epsilon", "delta", "rates", "estimator", "view", "view_epsilon"});
  const auto algo = get_or<std::string>(j, "algorithm", "exp3-wix", "policy");
  const RateSchedule rates =
      j.contains("rates") ? parse_rates(j.at("rates"), default_r) : RateSchedule::adaptive(default_r);
  const double eps = get_or<double>(j, "epsilon", 1.0, "policy");
  const double delta = get_or<double>(j, "delta", 1.0, "policy");
  const bool custom = algo == "custom";
  if (!custom && (j.contains("estimator") || j.contains("view") || j.contains("view_epsilon"))) {
    bad_config("'estimator', 'view' and 'view_epsilon' are only allowed with algorithm 'custom'");
  }
  if (algo == "exp3") return PolicyConfig::exp3(rates);
  if (algo == "exp3-ix") return PolicyConfig::exp3_ix(rates);
  if (algo == "exp3-ixb") return PolicyConfig::exp3_ixb(eps, rates);
  if (algo == "exp3-ixt") return PolicyConfig::exp3_ixt(eps, rates);
  if (algo == "exp3-wix") return PolicyConfig::exp3_wix(rates, delta);
  if (!custom) bad_config("unknown algorithm '" + algo + "'");

  PolicyConfig p;
  p.name = "custom";
  p.rates = rates;
  const auto est = get_or<std::string>(j, "estimator", "weighted", "policy");
  if (est == "basic") {
    p.estimator.kind = EstimatorKind::kBasic;
  } else if (est == "truncated") {
    p.estimator.kind = EstimatorKind::kTruncated;
  } else if (est == "weighted") {
    p.estimator.kind = EstimatorKind::kWeighted;
  } else {
    bad_config("unknown estimator '" + est + "'");
  }
  p.estimator.epsilon = eps;
  p.estimator.delta = delta;
  const auto view = get_or<std::string>(j, "view", "full", "policy");
  if (view == "full") {
    p.view = ObservationView::kFull;
  } else if (view == "bandit") {
    p.view = ObservationView::kBandit;
  } else if (view == "binarized") {
    p.view = ObservationView::kBinarized;
  } else {
    bad_config("unknown view '" + view + "'");
  }
  p.view_epsilon = get_or<double>(j, "view_epsilon", 1.0, "policy");
  return p;
}

json rates_json(const RateSchedule& r) {
  if (r.mode == RateSchedule::Mode::kAdaptive) return {{"mode", "adaptive"}, {"R", r.noise_bound}};
  return {{"mode", "static"}, {"eta", r.eta}, {"gamma", r.gamma}, {"R", r.noise_bound}};
}

json policy_json(const PolicyConfig& p) {
  json j{{"algorithm", p.name}, {"rates", rates_json(p.rates)}};
  if (p.name == "exp3-ixt") j["epsilon"] = p.estimator.epsilon;
  if (p.name == "exp3-ixb") j["epsilon"] = p.view_epsilon;
  if (p.name == "exp3-wix") j["delta"] = p.estimator.delta;
  if (p.name == "custom") {
    j["estimator"] = estimator_name(p.estimator.kind);
    j["epsilon"] = p.estimator.epsilon;
    j["delta"] = p.estimator.delta;
    j["view"] = view_name(p.view);
    j["view_epsilon"] = p.view_epsilon;
  }
  return j;
}

void write_cell(std::ostream& out, double v) { out << format_double(v); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(std::string_view text, std::size_t line_no) {
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::kInvalidInput,
         "line " + std::to_string(line_no) + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string graph_to_json(const ObservationGraph& g) {
  json j{{"n", g.size()},
         {"weights", std::vector<double>(g.weights().begin(), g.weights().end())}};
  return j.dump();
}

ObservationGraph graph_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kInvalidInput, std::string("graph file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("weights")) {
    fail(ErrorCode::kInvalidInput, "graph file needs fields 'n' and 'weights'");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "n" && key != "weights") {
      fail(ErrorCode::kInvalidInput, "unknown field '" + key + "' in graph file");
    }
  }
  if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 1) {
    fail(ErrorCode::kInvalidInput, "'n' must be a positive integer");
  }
  const auto n = j["n"].get<std::size_t>();
  std::vector<double> w;
  try {
    w = j["weights"].get<std::vector<double>>();
  } catch (const json::exception&) {
    fail(ErrorCode::kInvalidInput, "'weights' must be an array of numbers");
  }
  return ObservationGraph(n, std::move(w));
}

ObservationGraph load_graph(const std::string& path) {
  return graph_from_json(read_text_file(path));
}

void save_graph(const std::string& path, const ObservationGraph& g) {
  write_text_file(path, graph_to_json(g) + "\n");
}

void write_losses_csv(std::ostream& out, const LossSequence& losses) {
  for (std::size_t i = 0; i < losses.arms(); ++i) {
    out << (i ? "," : "") << "arm_" << i;
  }
  out << '\n';
  for (std::size_t t = 0; t < losses.horizon(); ++t) {
    for (std::size_t i = 0; i < losses.arms(); ++i) {
      if (i) out << ',';
      write_cell(out, losses.at(t, i));
    }
    out << '\n';
  }
}

LossSequence read_losses_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kInvalidInput, "loss CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != "arm_" + std::to_string(i)) {
      fail(ErrorCode::kInvalidInput, "loss CSV header must be arm_0,...,arm_{N-1}");
    }
  }
  const std::size_t arms = header.size();
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != arms) {
      fail(ErrorCode::kInvalidInput, "line " + std::to_string(line_no) + " has " +
                                         std::to_string(cells.size()) + " cells, expected " +
                                         std::to_string(arms));
    }
    for (const auto& c : cells) values.push_back(parse_double(c, line_no));
    ++rows;
  }
  if (rows == 0) fail(ErrorCode::kInvalidInput, "loss CSV has no rounds");
  return LossSequence(rows, arms, std::move(values));
}

LossSequence load_losses(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  return read_losses_csv(in);
}

void save_losses(const std::string& path, const LossSequence& losses) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  write_losses_csv(out, losses);
}

RunConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad_config(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, "config", {"arms", "horizon", "policy", "graph", "losses", "noise", "seed",
                               "repetitions"});
  RunConfig cfg;
  cfg.arms = get_count(j, "arms", cfg.arms, "config");
  cfg.horizon = get_count(j, "horizon", cfg.horizon, "config");
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed, "config");
  cfg.repetitions = get_count(j, "repetitions", cfg.repetitions, "config");
  cfg.noise = j.contains("noise") ? parse_noise(j.at("noise")) : NoiseModel{};
  cfg.policy = j.contains("policy") ? parse_policy(j.at("policy"), cfg.noise.bound)
                                    : PolicyConfig::exp3_wix(RateSchedule::adaptive(cfg.noise.bound));
  cfg.graph = j.contains("graph") ? parse_graph(j.at("graph")) : GraphSpec{};
  cfg.losses = j.contains("losses") ? parse_losses(j.at("losses")) : LossSpec{};
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) { return config_from_json(read_text_file(path)); }

std::string config_to_json(const RunConfig& cfg) {
  json j{{"arms", cfg.arms},
         {"horizon", cfg.horizon},
         {"seed", cfg.seed},
         {"repetitions", cfg.repetitions},
         {"policy", policy_json(cfg.policy)},
         {"graph", graph_spec_json(cfg.graph)},
         {"losses", loss_spec_json(cfg.losses)},
         {"noise", {{"distribution", noise_name(cfg.noise.kind)}, {"R", cfg.noise.bound}}}};
  return j.dump(2);
}

void write_trace_csv(std::ostream& out, const RegretTrace& trace) {
  out << "round,arm,loss,cum_regret,Q,eta,gamma\n";
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const RoundRecord& r = trace.rounds[t];
    out << (t + 1) << ',' << r.arm << ',' << format_double(r.loss) << ','
        << format_double(r.cum_regret) << ',' << format_double(r.q) << ','
        << format_double(r.eta) << ',' << format_double(r.gamma) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateResult>& results) {
  out << "config_key,rep,final_regret\n";
  for (const AggregateResult& a : results) {
    for (std::size_t rep = 0; rep < a.regrets.size(); ++rep) {
      out << a.key << ',' << rep << ',' << format_double(a.regrets[rep]) << '\n';
    }
  }
}

void write_alpha_scatter_csv(std::ostream& out, const std::vector<AlphaScatterRow>& rows) {
  out << "n,seed,alpha_star,eps_star\n";
  for (const AlphaScatterRow& r : rows) {
    out << r.n << ',' << r.seed << ',';
    if (r.budget_exceeded) {
      out << "budget-exceeded,budget-exceeded\n";
    } else {
      out << format_double(r.alpha_star) << ',' << format_double(r.epsilon_star) << '\n';
    }
  }
}

std::string alpha_star_to_json(const AlphaStarResult& result) {
  json curve = json::array();
  for (const AlphaCurvePoint& p : result.curve) {
    curve.push_back({{"epsilon", p.epsilon}, {"alpha", p.alpha}, {"ratio", p.ratio}});
  }
  json j{{"alpha_star", result.alpha_star},
         {"epsilon_star", result.epsilon_star},
         {"curve", curve}};
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "failed writing " + path);
}

}  // namespace sideobs
