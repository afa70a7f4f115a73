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

// Command-line driver: validate, threshold, sweep, report, joint-check, catalog.

#include "fusionloss/bsm.hpp"
#include "fusionloss/errors.hpp"
#include "fusionloss/fbqc.hpp"
#include "fusionloss/loss.hpp"
#include "fusionloss/report.hpp"
#include "fusionloss/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fl = fusionloss;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::string config_path;
  std::string scheme = "phi_plus";
  std::string network = "six_ring";
  std::string encoding = "shor_2_2";
  std::string axis;
  std::string out;
  std::vector<std::string> formats;
  std::string circuit;
  int workers = 0;
  std::uint64_t seed = 0;
};

fl::SweepConfig base_config(const Common& c) {
  fl::SweepConfig config = c.config_path.empty() ? fl::SweepConfig{} : fl::load_config(c.config_path);
  if (c.workers > 0) config.worker_count = c.workers;
  if (!c.out.empty()) config.output_dir = c.out;
  if (!c.formats.empty()) config.formats = c.formats;
  config.validate();
  return config;
}

fl::NetworkKind need_network(const std::string& name) {
  auto n = fl::parse_network(name);
  if (!n) throw fl::ConfigError("unknown network '" + name + "' (six_ring, four_star)");
  return *n;
}

fl::EncodingMode need_encoding(const std::string& name) {
  auto e = fl::parse_encoding(name);
  if (!e) throw fl::ConfigError("unknown encoding '" + name + "' (bare, shor_2_2)");
  return *e;
}

void need_scheme(const std::string& name) {
  const auto& names = fl::catalog_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw fl::ConfigError("unknown scheme '" + name + "'");
}

std::optional<fl::CircuitLayout> circuit_override(const Common& c) {
  if (c.circuit.empty()) return std::nullopt;
  try {
    return fl::load_layout(c.circuit);
  } catch (const fl::ContractError& e) {
    throw fl::ConfigError(e.what());
  }
}

bool wants(const Common& c, const char* format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

int run_validate(const Common& c) {
  const auto report = fl::validate_catalog();
  if (wants(c, "json")) {
    std::cout << "{\"checks\": [\n";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
      const auto& k = report.checks[i];
      std::cout << "  {\"name\": \"" << k.name << "\", \"value\": " << fl::format_number(k.value)
                << ", \"expected\": " << (k.expected ? fl::format_number(*k.expected) : "null")
                << ", \"pass\": " << (k.pass ? "true" : "false") << "}"
                << (i + 1 < report.checks.size() ? ",\n" : "\n");
    }
    std::cout << "], \"pass\": " << (report.all_pass() ? "true" : "false") << "}\n";
  } else {
    for (const auto& k : report.checks) {
      std::cout << (k.pass ? "PASS " : "FAIL ") << std::left << std::setw(40) << k.name << ' '
                << std::fixed << std::setprecision(6) << k.value;
      if (k.expected) std::cout << "  expected " << *k.expected << " +/- " << std::defaultfloat << k.tolerance;
      if (!k.note.empty()) std::cout << "  (" << k.note << ")";
      std::cout << std::defaultfloat << '\n';
    }
    std::cout << (report.all_pass() ? "catalog OK\n" : "catalog validation FAILED\n");
  }
  return report.all_pass() ? 0 : kExitValidation;
}

int run_threshold(const Common& c) {
  need_scheme(c.scheme);
  const auto config = base_config(c);
  const auto net = fl::network(need_network(c.network));
  const auto enc = need_encoding(c.encoding);
  std::vector<fl::Axis> axes(fl::kAxes.begin(), fl::kAxes.end());
  if (!c.axis.empty()) {
    auto a = fl::parse_axis(c.axis);
    if (!a) throw fl::ConfigError("unknown axis '" + c.axis + "'");
    axes = {*a};
  }
  fl::SchemeEvaluator scheme(c.scheme, circuit_override(c));
  fl::ThresholdResult result{fl::summarize(scheme), net.kind, enc, {}, {}};
  for (auto axis : axes) {
    const auto idx = static_cast<std::size_t>(axis);
    result.marginal[idx] = fl::marginal_threshold(scheme, net, enc, axis, config.bisection_tolerance,
                                                  config.layer_length_um);
  }
  std::ostringstream text;
  if (wants(c, "json")) {
    text << fl::results_to_json({result}, false);
  } else {
    std::ostringstream all;
    fl::write_results_csv(all, {result});
    // Keep only the requested axes.
    std::string line;
    std::istringstream rows(all.str());
    std::getline(rows, line);
    text << line << '\n';
    while (std::getline(rows, line)) {
      for (auto axis : axes)
        if (line.find("," + fl::to_string(axis) + ",") != std::string::npos) text << line << '\n';
    }
  }
  if (c.out.empty()) {
    std::cout << text.str();
  } else {
    std::filesystem::create_directories(c.out);
    const auto path = std::filesystem::path(c.out) / (wants(c, "json") ? "threshold.json" : "threshold.csv");
    std::ofstream(path, std::ios::binary) << text.str();
    std::cout << path.string() << '\n';
  }
  const auto& s = result.summary;
  std::cerr << s.scheme << ": " << s.beamsplitters[0] << " beamsplitters, " << s.swaps[0] << " swaps, "
            << s.layers[0] << " layers (failure XX); " << s.beamsplitters[1] << " beamsplitters, "
            << s.swaps[1] << " swaps, " << s.layers[1] << " layers (failure ZZ)\n";
  return 0;
}

int run_sweep(const Common& c) {
  if (c.config_path.empty()) throw fl::ConfigError("sweep needs --config");
  const auto config = base_config(c);
  const auto results = fl::sweep_slices(config);
  for (const auto& path : fl::write_report(results, config.output_dir, config.formats))
    std::cout << path << '\n';
  return 0;
}

int run_report(const Common& c, const std::string& results_path) {
  std::ifstream in(results_path);
  if (!in) throw fl::ConfigError("cannot open results file " + results_path);
  std::ostringstream text;
  text << in.rdbuf();
  const auto results = fl::results_from_json(text.str());
  const auto formats = c.formats.empty() ? std::vector<std::string>{"csv", "json", "svg"} : c.formats;
  const std::string dir = c.out.empty() ? std::filesystem::path(results_path).parent_path().string() : c.out;
  for (const auto& path : fl::write_report(results, dir.empty() ? "." : dir, formats))
    std::cout << path << '\n';
  return 0;
}

int run_joint(const Common& c, const fl::LossParams& params) {
  need_scheme(c.scheme);
  const auto net = fl::network(need_network(c.network));
  const auto enc = need_encoding(c.encoding);
  fl::SchemeEvaluator scheme(c.scheme, circuit_override(c));
  const auto j = fl::joint_check(scheme, net, enc, params);
  std::cout << "scheme " << j.scheme << '\n'
            << "network " << net.name << " (threshold " << net.threshold_p_er << ")\n"
            << "encoding " << fl::to_string(enc) << '\n'
            << "p_eff " << params.p_eff() << ", bs_loss_db " << params.bs_loss_db
            << ", prop_loss_db_per_cm " << params.prop_loss_db_per_cm << ", layer_length_um "
            << params.layer_length_um << '\n'
            << "p_succ " << fl::format_number(j.p_succ) << '\n'
            << "p_loss " << fl::format_number(j.p_loss) << '\n'
            << "p_0 " << fl::format_number(j.assessment.p_0) << '\n';
  if (j.assessment.p_enc) std::cout << "p_enc " << fl::format_number(*j.assessment.p_enc) << '\n';
  std::cout << "correctable " << (j.assessment.correctable ? "yes" : "no") << '\n';
  return 0;
}

int run_catalog(const Common& c, bool all) {
  std::vector<std::string> names = all ? fl::catalog_names() : std::vector<std::string>{c.scheme};
  for (const auto& n : names) need_scheme(n);
  for (const auto& n : names) {
    for (auto op : {fl::Operator::XX, fl::Operator::ZZ}) {
      auto scheme = fl::catalog_scheme(n, fl::Operator::XX);
      if (auto layout = all ? std::nullopt : circuit_override(c)) scheme.layout = *layout;
      scheme = fl::with_failure_basis(scheme, op);
      std::ostringstream text;
      fl::export_scheme(text, scheme);
      if (c.out.empty()) {
        std::cout << text.str() << '\n';
      } else {
        std::filesystem::create_directories(c.out);
        const auto path = std::filesystem::path(c.out) / (n + "_" + fl::to_string(op) + ".txt");
        std::ofstream(path, std::ios::binary) << text.str();
        std::cout << path.string() << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss thresholds of linear-optical fusion circuits"};
  app.require_subcommand(1);
  Common c;
  const std::vector<std::string> formats{"csv", "json", "svg"};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--format", c.formats, "Output format(s)")->check(CLI::IsMember(formats));
    sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Reserved; all computation is deterministic");
  };
  auto add_target = [&](CLI::App* sub) {
    sub->add_option("--scheme", c.scheme, "Catalog scheme")->capture_default_str();
    sub->add_option("--network", c.network, "six_ring or four_star")->capture_default_str();
    sub->add_option("--encoding", c.encoding, "bare or shor_2_2")->capture_default_str();
    sub->add_option("--circuit", c.circuit, "Replace the scheme's circuit with a layout file")
        ->check(CLI::ExistingFile);
  };

  auto* validate = app.add_subcommand("validate", "Check lossless p_succ values and min_p_succ");
  add_common(validate);

  auto* threshold = app.add_subcommand("threshold", "Marginal loss thresholds for one scheme");
  add_common(threshold);
  add_target(threshold);
  threshold->add_option("--axis", c.axis, "p_eff, bs_loss_db or prop_loss_db_per_cm (default: all)");

  auto* sweep = app.add_subcommand("sweep", "Thresholds and slices for a run configuration");
  add_common(sweep);

  std::string results_path;
  auto* report = app.add_subcommand("report", "Re-render a results.json in other formats");
  add_common(report);
  report->add_option("--results", results_path, "results.json written by sweep")
      ->required()
      ->check(CLI::ExistingFile);

  fl::LossParams joint = fl::LossParams::combined(0.97, 0.048, 0.48);
  double joint_p_eff = 0.97;
  auto* jc = app.add_subcommand("joint-check", "Correctability with all loss sources at once");
  add_common(jc);
  add_target(jc);
  jc->add_option("--p-eff", joint_p_eff, "Combined generation and detection efficiency")
      ->capture_default_str();
  jc->add_option("--bs-db", joint.bs_loss_db, "Loss per beamsplitter in dB")->capture_default_str();
  jc->add_option("--prop-db", joint.prop_loss_db_per_cm, "Propagation loss in dB/cm")->capture_default_str();
  jc->add_option("--layer-um", joint.layer_length_um, "Layer length in micrometers")->capture_default_str();

  bool all_schemes = false;
  auto* catalog = app.add_subcommand("catalog", "Export scheme circuits and pattern tables");
  add_common(catalog);
  add_target(catalog);
  catalog->add_flag("--all", all_schemes, "Every catalog scheme");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*validate) return run_validate(c);
    if (*threshold) return run_threshold(c);
    if (*sweep) return run_sweep(c);
    if (*report) return run_report(c, results_path);
    if (*jc) {
      joint.p_gen = joint_p_eff;
      joint.p_det = 1.0;
      joint.validate();
      return run_joint(c, joint);
    }
    if (*catalog) return run_catalog(c, all_schemes);
  } catch (const fl::IntegrityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fl::ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
