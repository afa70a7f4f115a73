/**
 * Copyright 2026 The fusionloss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fusionloss/sweep.hpp"

#include "fusionloss/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>
#include <utility>

namespace fusionloss {

using json = nlohmann::json;

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::p_eff: return "p_eff";
    case Axis::bs_loss_db: return "bs_loss_db";
    case Axis::prop_loss_db_per_cm: return "prop_loss_db_per_cm";
  }
  return "?";
}

std::string units(Axis axis) {
  switch (axis) {
    case Axis::p_eff: return "probability";
    case Axis::bs_loss_db: return "dB";
    case Axis::prop_loss_db_per_cm: return "dB/cm";
  }
  return "?";
}

std::optional<Axis> parse_axis(const std::string& name) {
  for (auto axis : kAxes)
    if (to_string(axis) == name) return axis;
  return std::nullopt;
}

double ideal_value(Axis axis) { return axis == Axis::p_eff ? 1.0 : 0.0; }

LossParams params_on_axis(Axis axis, double value, double layer_length_um) {
  LossParams p;
  p.layer_length_um = layer_length_um;
  switch (axis) {
    case Axis::p_eff: p.p_gen = value; break;
    case Axis::bs_loss_db: p.bs_loss_db = value; break;
    case Axis::prop_loss_db_per_cm: p.prop_loss_db_per_cm = value; break;
  }
  return p;
}

namespace {

void set_axis(LossParams& p, Axis axis, double value) {
  switch (axis) {
    case Axis::p_eff: p.p_gen = value; p.p_det = 1.0; break;
    case Axis::bs_loss_db: p.bs_loss_db = value; break;
    case Axis::prop_loss_db_per_cm: p.prop_loss_db_per_cm = value; break;
  }
}

}  // namespace

double AxisRange::at(int i) const {
  if (points <= 1) return min;
  // Endpoints are exact; interior points are evenly spaced.
  if (i == points - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
}

// ---------------------------------------------------------------------------
// Configuration

const AxisRange& SweepConfig::range(Axis axis) const {
  switch (axis) {
    case Axis::p_eff: return p_eff;
    case Axis::bs_loss_db: return bs_loss_db;
    case Axis::prop_loss_db_per_cm: return prop_loss_db_per_cm;
  }
  throw ConfigError("unknown axis");
}

AxisRange& SweepConfig::range(Axis axis) {
  return const_cast<AxisRange&>(std::as_const(*this).range(axis));
}

void SweepConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
  if (schemes.empty()) fail("no schemes selected");
  const auto& names = catalog_names();
  for (const auto& s : schemes)
    if (std::find(names.begin(), names.end(), s) == names.end()) fail("unknown scheme '" + s + "'");
  if (networks.empty()) fail("no networks selected");
  if (encodings.empty()) fail("no encodings selected");
  for (auto axis : kAxes) {
    const auto& r = range(axis);
    const std::string name = to_string(axis);
    if (!(r.points >= 2)) fail(name + ": at least 2 points per axis");
    if (!(r.min < r.max)) fail(name + ": min must be below max");
    if (axis == Axis::p_eff) {
      if (r.min < 0.0 || r.max > 1.0) fail(name + ": range must lie in [0, 1]");
    } else if (r.min < 0.0 || !std::isfinite(r.max)) {
      fail(name + ": range must be non-negative and finite");
    }
  }
  if (!(layer_length_um > 0.0) || !std::isfinite(layer_length_um)) fail("layer_length_um must be > 0");
  if (!(bisection_tolerance > 0.0)) fail("bisection_tolerance must be > 0");
  if (worker_count < 1) fail("worker_count must be >= 1");
  if (output_dir.empty()) fail("output_dir must not be empty");
  for (const auto& f : formats)
    if (f != "csv" && f != "json" && f != "svg") fail("unknown format '" + f + "'");
}

SweepConfig parse_config(const std::string& json_text) {
  SweepConfig c;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::vector<std::string> known{
      "schemes", "networks", "encodings", "axes", "layer_length_um", "bisection_tolerance",
      "worker_count", "output_dir", "formats", "seed"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config: unknown key '" + key + "'");
  try {
    if (j.contains("schemes")) c.schemes = j.at("schemes").get<std::vector<std::string>>();
    if (j.contains("networks")) {
      c.networks.clear();
      for (const auto& n : j.at("networks").get<std::vector<std::string>>()) {
        auto kind = parse_network(n);
        if (!kind) throw ConfigError("config: unknown network '" + n + "'");
        c.networks.push_back(*kind);
      }
    }
    if (j.contains("encodings")) {
      c.encodings.clear();
      for (const auto& e : j.at("encodings").get<std::vector<std::string>>()) {
        auto mode = parse_encoding(e);
        if (!mode) throw ConfigError("config: unknown encoding '" + e + "'");
        c.encodings.push_back(*mode);
      }
    }
    if (j.contains("axes")) {
      const auto& axes = j.at("axes");
      for (const auto& [key, value] : axes.items()) {
        auto axis = parse_axis(key);
        if (!axis) throw ConfigError("config: unknown axis '" + key + "'");
        AxisRange& r = c.range(*axis);
        if (value.contains("min")) r.min = value.at("min").get<double>();
        if (value.contains("max")) r.max = value.at("max").get<double>();
        if (value.contains("points")) r.points = value.at("points").get<int>();
      }
    }
    if (j.contains("layer_length_um")) c.layer_length_um = j.at("layer_length_um").get<double>();
    if (j.contains("bisection_tolerance"))
      c.bisection_tolerance = j.at("bisection_tolerance").get<double>();
    if (j.contains("worker_count")) c.worker_count = j.at("worker_count").get<int>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("formats")) c.formats = j.at("formats").get<std::vector<std::string>>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const SweepConfig& c) {
  json j;
  j["schemes"] = c.schemes;
  j["networks"] = json::array();
  for (auto n : c.networks) j["networks"].push_back(network(n).name);
  j["encodings"] = json::array();
  for (auto e : c.encodings) j["encodings"].push_back(to_string(e));
  for (auto axis : kAxes) {
    const auto& r = c.range(axis);
    j["axes"][to_string(axis)] = {{"min", r.min}, {"max", r.max}, {"points", r.points}};
  }
  j["layer_length_um"] = c.layer_length_um;
  j["bisection_tolerance"] = c.bisection_tolerance;
  j["worker_count"] = c.worker_count;
  j["output_dir"] = c.output_dir;
  j["formats"] = c.formats;
  j["seed"] = c.seed;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Work pool

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
  const std::size_t width = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (width <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(width - 1);
  for (std::size_t w = 1; w < width; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Scheme evaluation

SchemeEvaluator::SchemeEvaluator(const std::string& name, std::optional<CircuitLayout> layout_override)
    : xx_(catalog_scheme(name, Operator::XX)), zz_(catalog_scheme(name, Operator::ZZ)), p_succ_(0.0) {
  if (layout_override) {
    if (layout_override->mode_count() != xx_.mode_count())
      throw ConfigError("circuit override has " + std::to_string(layout_override->mode_count()) +
                        " modes, scheme " + name + " needs " + std::to_string(xx_.mode_count()));
    xx_.layout = *layout_override;
    zz_ = with_failure_basis(xx_, Operator::ZZ);
  }
  const double p_xx = success_probability(xx_);
  const double p_zz = success_probability(zz_);
  if (std::abs(p_xx - p_zz) > 1e-9)
    throw IntegrityError("scheme " + name + ": XX and ZZ variants disagree on p_succ");
  p_succ_ = p_xx;
}

double SchemeEvaluator::p_loss(const LossParams& params) const {
  const std::array<double, 5> key{params.p_gen, params.p_det, params.bs_loss_db,
                                  params.prop_loss_db_per_cm, params.layer_length_um};
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const double value = static_bias_p_loss(xx_, zz_, params);
  std::lock_guard lock(mutex_);
  memo_.emplace(key, value);
  return value;
}

std::optional<double> marginal_threshold(const SchemeEvaluator& scheme, const FusionNetwork& net,
                                         EncodingMode encoding, Axis axis, double tolerance,
                                         double layer_length_um) {
  detail::require(tolerance > 0.0, "marginal_threshold: tolerance must be > 0");
  auto correctable = [&](double value) {
    const double pl = scheme.p_loss(params_on_axis(axis, value, layer_length_um));
    return assess(scheme.p_succ(), pl, net, encoding).correctable;
  };
  const double ideal = ideal_value(axis);
  if (!correctable(ideal)) return std::nullopt;

  // `good` stays correctable, `bad` does not.
  double good = ideal;
  double bad;
  if (axis == Axis::p_eff) {
    bad = 0.0;
    if (correctable(bad)) return bad;
  } else {
    bad = 1.0;
    while (correctable(bad)) {
      good = bad;
      bad *= 2.0;
      if (bad > 1e4) return std::nullopt;
    }
  }
  while (std::abs(bad - good) > tolerance) {
    const double mid = 0.5 * (good + bad);
    (correctable(mid) ? good : bad) = mid;
  }
  return 0.5 * (good + bad);
}

const SliceSample& SliceData::at(int ix, int iy) const {
  return samples[static_cast<std::size_t>(ix * y_range.points + iy)];
}

SchemeSummary summarize(const SchemeEvaluator& scheme) {
  const auto& xx = scheme.xx_variant();
  const auto& zz = scheme.zz_variant();
  return SchemeSummary{xx.name,
                       xx.ancilla.label,
                       xx.mode_count(),
                       xx.photon_count(),
                       scheme.p_succ(),
                       {xx.layout.count(ElementKind::beamsplitter), zz.layout.count(ElementKind::beamsplitter)},
                       {xx.layout.count(ElementKind::swap), zz.layout.count(ElementKind::swap)},
                       {xx.layout.layer_count(), zz.layout.layer_count()}};
}

std::vector<LossGrid> loss_grids(const SchemeEvaluator& scheme, const SweepConfig& config) {
  const std::array<std::pair<Axis, Axis>, 3> pairs{{{Axis::p_eff, Axis::bs_loss_db},
                                                    {Axis::p_eff, Axis::prop_loss_db_per_cm},
                                                    {Axis::bs_loss_db, Axis::prop_loss_db_per_cm}}};
  std::vector<LossGrid> grids;
  for (auto [xa, ya] : pairs) {
    LossGrid g{xa, ya, config.range(xa), config.range(ya), {}};
    const int nx = g.x_range.points;
    const int ny = g.y_range.points;
    g.p_loss.assign(static_cast<std::size_t>(nx * ny), 0.0);
    parallel_for(g.p_loss.size(), config.worker_count, [&](std::size_t idx) {
      const int ix = static_cast<int>(idx) / ny;
      const int iy = static_cast<int>(idx) % ny;
      LossParams p;
      p.layer_length_um = config.layer_length_um;
      set_axis(p, xa, g.x_range.at(ix));
      set_axis(p, ya, g.y_range.at(iy));
      g.p_loss[idx] = scheme.p_loss(p);
    });
    grids.push_back(std::move(g));
  }
  return grids;
}

std::vector<ThresholdResult> sweep_slices(const SweepConfig& config) {
  config.validate();
  std::vector<ThresholdResult> results;
  for (const auto& name : config.schemes) {
    SchemeEvaluator scheme(name);
    const auto summary = summarize(scheme);
    const auto grids = loss_grids(scheme, config);

    struct Job {
      NetworkKind network;
      EncodingMode encoding;
      Axis axis;
    };
    std::vector<Job> jobs;
    for (auto n : config.networks)
      for (auto e : config.encodings)
        for (auto a : kAxes) jobs.push_back({n, e, a});
    std::vector<std::optional<double>> thresholds(jobs.size());
    parallel_for(jobs.size(), config.worker_count, [&](std::size_t i) {
      thresholds[i] = marginal_threshold(scheme, network(jobs[i].network), jobs[i].encoding,
                                         jobs[i].axis, config.bisection_tolerance,
                                         config.layer_length_um);
    });

    std::size_t job = 0;
    for (auto n : config.networks) {
      for (auto e : config.encodings) {
        ThresholdResult r{summary, n, e, {}, {}};
        for (std::size_t a = 0; a < kAxes.size(); ++a) r.marginal[a] = thresholds[job++];
        const auto net = network(n);
        for (const auto& g : grids) {
          SliceData s{g.x_axis, g.y_axis, g.x_range, g.y_range, {}};
          s.samples.reserve(g.p_loss.size());
          for (int ix = 0; ix < g.x_range.points; ++ix) {
            for (int iy = 0; iy < g.y_range.points; ++iy) {
              const double pl = g.p_loss[static_cast<std::size_t>(ix * g.y_range.points + iy)];
              const auto verdict = assess(summary.p_succ, pl, net, e);
              s.samples.push_back({g.x_range.at(ix), g.y_range.at(iy), pl,
                                   verdict.effective_erasure, verdict.correctable});
            }
          }
          r.slices.push_back(std::move(s));
        }
        results.push_back(std::move(r));
      }
    }
  }
  return results;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.pass; });
}

ValidationReport validate_catalog() {
  ValidationReport report;
  for (const auto& name : catalog_names()) {
    for (auto op : {Operator::XX, Operator::ZZ}) {
      const auto scheme = catalog_scheme(name, op);
      const std::string label = "p_succ " + name + " (failure " + to_string(op) + ")";
      try {
        const auto table = classify_patterns(scheme);
        const double p = table.p_succ();
        const bool pass = !scheme.catalog_p_succ || std::abs(p - *scheme.catalog_p_succ) <= 1e-9;
        report.checks.push_back({label, p, scheme.catalog_p_succ, 1e-9, pass,
                                 scheme.catalog_p_succ ? "" : "computed"});
      } catch (const IntegrityError& e) {
        report.checks.push_back({label, 0.0, scheme.catalog_p_succ, 1e-9, false, e.what()});
      }
    }
  }
  const std::array<std::tuple<NetworkKind, EncodingMode, double>, 4> published{{
      {NetworkKind::six_ring, EncodingMode::bare, 0.76},
      {NetworkKind::six_ring, EncodingMode::shor_2_2, 0.57},
      {NetworkKind::four_star, EncodingMode::bare, 0.86},
      {NetworkKind::four_star, EncodingMode::shor_2_2, 0.67},
  }};
  for (const auto& [n, e, expected] : published) {
    const auto net = network(n);
    const double value = min_p_succ(net, e);
    report.checks.push_back({"min_p_succ " + net.name + " " + to_string(e), value, expected, 0.005,
                             std::abs(value - expected) <= 0.005, ""});
  }
  return report;
}

JointCheck joint_check(const SchemeEvaluator& scheme, const FusionNetwork& net,
                       EncodingMode encoding, const LossParams& params) {
  const double pl = scheme.p_loss(params);
  return JointCheck{scheme.name(), net.kind,  encoding, params, scheme.p_succ(), pl,
                    assess(scheme.p_succ(), pl, net, encoding)};
}

}  // namespace fusionloss
