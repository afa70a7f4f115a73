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

#include "fusionloss/errors.hpp"
#include "fusionloss/report.hpp"
#include "fusionloss/sweep.hpp"

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fusionloss;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fusionloss_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FUSIONLOSS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SweepConfig small_config() {
  SweepConfig c;
  c.schemes = {"regular", "phi_plus"};
  c.networks = {NetworkKind::six_ring, NetworkKind::four_star};
  c.encodings = {EncodingMode::bare, EncodingMode::shor_2_2};
  c.p_eff = {0.95, 1.0, 6};
  c.bs_loss_db = {0.0, 0.1, 5};
  c.prop_loss_db_per_cm = {0.0, 1.0, 5};
  c.bisection_tolerance = 1e-3;
  return c;
}

// Correctability improves with p_eff and degrades with every dB axis.
bool improves(Axis a) { return a == Axis::p_eff; }

}  // namespace

TEST_CASE("axes") {
  for (auto a : kAxes) CHECK(parse_axis(to_string(a)) == a);
  CHECK_FALSE(parse_axis("temperature").has_value());
  CHECK(units(Axis::p_eff) == "probability");
  CHECK(units(Axis::bs_loss_db) == "dB");
  CHECK(units(Axis::prop_loss_db_per_cm) == "dB/cm");
  const auto p = params_on_axis(Axis::bs_loss_db, 0.2, 300.0);
  CHECK(p.bs_loss_db == 0.2);
  CHECK(p.p_eff() == 1.0);
  CHECK(p.layer_length_um == 300.0);
  const AxisRange r{0.0, 1.0, 5};
  CHECK(r.at(0) == 0.0);
  CHECK(r.at(4) == 1.0);
  CHECK(r.at(2) == doctest::Approx(0.5));
}

TEST_CASE("config parsing") {
  const auto defaults = parse_config("{}");
  CHECK(defaults.schemes == std::vector<std::string>{"phi_plus"});
  CHECK(defaults.p_eff.points == 41);
  CHECK(defaults.layer_length_um == 500.0);

  const auto c = parse_config(R"({"schemes": ["regular", "a2"], "networks": ["four_star"],
      "encodings": ["bare"], "axes": {"bs_loss_db": {"min": 0, "max": 0.2, "points": 11}},
      "worker_count": 3, "output_dir": "x", "formats": ["svg"], "layer_length_um": 250})");
  CHECK(c.schemes.size() == 2);
  CHECK(c.networks == std::vector<NetworkKind>{NetworkKind::four_star});
  CHECK(c.bs_loss_db.max == 0.2);
  CHECK(c.bs_loss_db.points == 11);
  CHECK(c.worker_count == 3);
  CHECK(c.layer_length_um == 250.0);
  CHECK(c.formats == std::vector<std::string>{"svg"});

  // Round trip through the writer.
  const auto again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));

  for (const char* bad : {R"({"unknown": 1})", R"({"schemes": ["nope"]})", R"({"networks": ["ring"]})",
                          R"({"axes": {"p_eff": {"min": 0.9, "max": 1.2, "points": 5}}})",
                          R"({"axes": {"bs_loss_db": {"min": -1, "max": 1, "points": 5}}})",
                          R"({"axes": {"bs_loss_db": {"min": 0, "max": 1, "points": 1}}})",
                          R"({"worker_count": 0})", R"({"formats": ["pdf"]})", "[1, 2", R"({"schemes": 3})"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  CHECK_NOTHROW(load_config(std::string(FUSIONLOSS_TEST_DATA) + "/../../configs/default.json"));
}

TEST_CASE("parallel_for visits every index once") {
  for (int workers : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw ContractError("boom");
                  }),
                  ContractError);
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("scheme evaluator") {
  SchemeEvaluator phi("phi_plus");
  CHECK(phi.p_succ() == doctest::Approx(0.75).epsilon(1e-12));
  const auto p = LossParams::combined(0.98, 0.02, 0.2);
  const double a = phi.p_loss(p);
  CHECK(a == phi.p_loss(p));
  CHECK(a == doctest::Approx(static_bias_p_loss(phi.xx_variant(), phi.zz_variant(), p)));
  CHECK(phi.p_loss(LossParams::combined(0.97, 0, 0)) == doctest::Approx(1 - std::pow(0.97, 4)).epsilon(1e-12));
  CHECK_THROWS_AS(SchemeEvaluator("bogus"), ContractError);

  const auto s = summarize(phi);
  CHECK(s.modes == 8);
  CHECK(s.photons == 4);
  CHECK(s.beamsplitters[0] == 10);
  CHECK(s.beamsplitters[1] == 8);
}

TEST_CASE("marginal thresholds") {
  SchemeEvaluator phi("phi_plus");
  SchemeEvaluator regular("regular");
  const auto six = network(NetworkKind::six_ring);
  const auto four = network(NetworkKind::four_star);
  const double tol = 1e-5;

  const auto t = marginal_threshold(phi, six, EncodingMode::shor_2_2, Axis::p_eff, tol);
  REQUIRE(t.has_value());
  // With only p_eff active, p_loss = 1 - p_eff^4 and the threshold has a closed form.
  CHECK(std::abs(*t - 0.9729235614) < 2 * tol);
  const double e = effective_erasure(0.75, 1 - std::pow(*t, 4), EncodingMode::shor_2_2);
  CHECK(std::abs(e - six.threshold_p_er) < 10 * tol);

  for (auto a : kAxes) {
    CHECK_FALSE(marginal_threshold(regular, six, EncodingMode::bare, a, tol).has_value());
    CHECK_FALSE(marginal_threshold(phi, six, EncodingMode::bare, a, tol).has_value());
  }

  // Bisection postcondition on the dB axes.
  for (auto a : {Axis::bs_loss_db, Axis::prop_loss_db_per_cm}) {
    const auto v = marginal_threshold(phi, six, EncodingMode::shor_2_2, a, 1e-6);
    REQUIRE(v.has_value());
    const double pl = phi.p_loss(params_on_axis(a, *v, 500.0));
    CHECK(std::abs(effective_erasure(0.75, pl, EncodingMode::shor_2_2) - six.threshold_p_er) < 1e-5);
  }

  // Four-star budgets are tighter; Shor budgets are looser than bare.
  SchemeEvaluator b2("phi_plus_b2");
  const auto b2_six_bare = marginal_threshold(b2, six, EncodingMode::bare, Axis::p_eff, tol);
  const auto b2_six_shor = marginal_threshold(b2, six, EncodingMode::shor_2_2, Axis::p_eff, tol);
  const auto b2_four_bare = marginal_threshold(b2, four, EncodingMode::bare, Axis::p_eff, tol);
  const auto b2_four_shor = marginal_threshold(b2, four, EncodingMode::shor_2_2, Axis::p_eff, tol);
  REQUIRE(b2_six_bare);
  REQUIRE(b2_six_shor);
  REQUIRE(b2_four_bare);
  REQUIRE(b2_four_shor);
  CHECK(*b2_four_bare > *b2_six_bare);
  CHECK(*b2_four_shor > *b2_six_shor);
  CHECK(*b2_six_shor < *b2_six_bare);
  CHECK(*b2_four_shor < *b2_four_bare);
  const auto phi_four_shor = marginal_threshold(phi, four, EncodingMode::shor_2_2, Axis::prop_loss_db_per_cm, tol);
  const auto phi_six_shor = marginal_threshold(phi, six, EncodingMode::shor_2_2, Axis::prop_loss_db_per_cm, tol);
  REQUIRE(phi_four_shor);
  REQUIRE(phi_six_shor);
  CHECK(*phi_four_shor < *phi_six_shor);
}

TEST_CASE("slices are monotone and bracket the marginals") {
  const auto config = small_config();
  const auto results = sweep_slices(config);
  REQUIRE(results.size() == 2 * 2 * 2);
  for (const auto& r : results) {
    CHECK(r.slices.size() == 3);
    for (const auto& s : r.slices) {
      const int nx = s.x_range.points;
      const int ny = s.y_range.points;
      REQUIRE(s.samples.size() == static_cast<std::size_t>(nx * ny));
      // y is always a loss axis: correctable flags form a prefix.
      for (int ix = 0; ix < nx; ++ix)
        for (int iy = 1; iy < ny; ++iy)
          if (s.at(ix, iy).correctable) CHECK(s.at(ix, iy - 1).correctable);
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 1; ix < nx; ++ix) {
          if (improves(s.x_axis)) {
            if (s.at(ix - 1, iy).correctable) CHECK(s.at(ix, iy).correctable);
          } else if (s.at(ix, iy).correctable) {
            CHECK(s.at(ix - 1, iy).correctable);
          }
        }
      // The all-ideal corner matches the lossless verdict.
      const int ideal_x = improves(s.x_axis) ? nx - 1 : 0;
      const auto& corner = s.at(ideal_x, 0);
      CHECK(corner.p_loss == doctest::Approx(0.0));
      CHECK(corner.correctable == assess(r.summary.p_succ, 0.0, network(r.network), r.encoding).correctable);
    }
    // Along each edge of the (p_eff, bs) slice the flip sits next to the marginal.
    const auto& s = r.slices[0];
    for (std::size_t a = 0; a < 2; ++a) {
      if (!r.marginal[a]) continue;
      const double m = *r.marginal[a];
      for (int i = 0; i < (a == 0 ? s.x_range.points : s.y_range.points); ++i) {
        const auto& sample = a == 0 ? s.at(i, 0) : s.at(s.x_range.points - 1, i);
        const double v = a == 0 ? sample.x : sample.y;
        if (std::abs(v - m) <= config.bisection_tolerance) continue;
        const bool inside = a == 0 ? v > m : v < m;
        CHECK(sample.correctable == inside);
      }
    }
  }
}

TEST_CASE("sweeps are deterministic and independent of worker count") {
  auto config = small_config();
  config.schemes = {"phi_plus"};
  const auto serial = results_to_json(sweep_slices(config));
  CHECK(serial == results_to_json(sweep_slices(config)));
  config.worker_count = 3;
  CHECK(serial == results_to_json(sweep_slices(config)));
}

TEST_CASE("results tables") {
  std::ostringstream empty;
  write_results_csv(empty, {});
  CHECK(empty.str() == "scheme,ancilla,p_succ,network,encoding,axis,threshold_value,units\n");
  CHECK(results_to_json({}) == "{\n \"results\": []\n}\n");

  auto config = small_config();
  config.schemes = {"phi_plus"};
  config.networks = {NetworkKind::six_ring};
  const auto results = sweep_slices(config);
  std::ostringstream csv;
  write_results_csv(csv, results);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
    CHECK(line.find(",,") == std::string::npos);
  }
  CHECK(rows == 2 * 3);
  CHECK(csv.str().find("phi_plus,|Phi+>,0.75") != std::string::npos);
  CHECK(csv.str().find(",six_ring,bare,p_eff,none,probability\n") != std::string::npos);

  const auto text = results_to_json(results);
  const auto back = results_from_json(text);
  CHECK(results_to_json(back) == text);
  CHECK_FALSE(back[0].marginal[0].has_value());
  CHECK(back[1].marginal[0].has_value());
  CHECK_THROWS_AS(results_from_json("{\"results\": [{}]}"), ContractError);

  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("frontier and svg") {
  SliceData s{Axis::bs_loss_db, Axis::prop_loss_db_per_cm, {0, 1, 3}, {0, 1, 5}, {}};
  // Column ix is correctable up to row 3 - ix.
  for (int ix = 0; ix < 3; ++ix)
    for (int iy = 0; iy < 5; ++iy) s.samples.push_back({s.x_range.at(ix), s.y_range.at(iy), 0, 0, iy <= 3 - ix});
  auto line = frontier(s);
  REQUIRE(line.size() == 3);
  CHECK(line[0].second == doctest::Approx(0.875));
  CHECK(line[2].second == doctest::Approx(0.375));
  s.samples[0].correctable = true;
  for (int iy = 0; iy < 5; ++iy) s.samples[static_cast<std::size_t>(iy)].correctable = true;
  CHECK(frontier(s)[0].second == doctest::Approx(1.0));
  for (int iy = 0; iy < 5; ++iy) s.samples[static_cast<std::size_t>(10 + iy)].correctable = false;
  CHECK(frontier(s).size() == 2);

  std::ostringstream svg;
  write_slice_svg(svg, s, "test");
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("class=\"frontier\"") != std::string::npos);
  CHECK(svg.str().find("</svg>") != std::string::npos);
}

TEST_CASE("report files") {
  auto config = small_config();
  config.schemes = {"phi_plus"};
  config.networks = {NetworkKind::six_ring};
  config.encodings = {EncodingMode::shor_2_2};
  const auto results = sweep_slices(config);
  const auto dir = scratch_dir("report");
  const auto paths = write_report(results, dir.string(), {"csv", "json", "svg"});
  CHECK(paths.size() == 2 + 3 + 1 + 3);
  for (const auto& p : paths) CHECK(fs::file_size(p) > 0);
  CHECK(fs::exists(dir / "results.csv"));
  CHECK(fs::exists(dir / "results.json"));
  CHECK(fs::exists(dir / "schemes.csv"));
  const auto again = write_report(results, dir.string(), {"csv", "json", "svg"});
  CHECK(again == paths);

  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(write_report(results, (blocker / "sub").string(), {"csv"}), ContractError);
  CHECK_THROWS_AS(write_report(results, dir.string(), {"pdf"}), ContractError);
}

TEST_CASE("command line") {
  const auto dir = scratch_dir("cli");
  const std::string data = FUSIONLOSS_TEST_DATA;
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("threshold --scheme phi_plus --axis p_eff --out " + (dir / "t").string()) == 0);
  CHECK(slurp(dir / "t" / "threshold.csv").find(",six_ring,shor_2_2,p_eff,0.97") != std::string::npos);
  CHECK(run_cli("threshold --scheme nonexistent") == 2);
  CHECK(run_cli("threshold --network hexagon") == 2);
  CHECK(run_cli("threshold --axis volume") == 2);
  CHECK(run_cli("sweep --config " + data + "/bad_config.json") == 2);
  CHECK(run_cli("sweep") != 0);
  CHECK(run_cli("frobnicate") == 2);

  // Byte-identical reruns, serial against parallel.
  const auto cfg = data + "/small_sweep.json";
  REQUIRE(run_cli("sweep --config " + cfg + " --workers 1 --out " + (dir / "a").string()) == 0);
  REQUIRE(run_cli("sweep --config " + cfg + " --workers 1 --out " + (dir / "b").string()) == 0);
  REQUIRE(run_cli("sweep --config " + cfg + " --workers 4 --out " + (dir / "c").string()) == 0);
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    INFO(name.string());
    CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
    CHECK(slurp(entry.path()) == slurp(dir / "c" / name));
  }
  CHECK(slurp(dir / "a" / "results.csv") == slurp(data + "/small_sweep_results.csv"));

  // Re-rendering a saved results.json gives the same tables and adds plots.
  REQUIRE(run_cli("report --results " + (dir / "a" / "results.json").string() + " --format csv --format svg --out " +
                  (dir / "r").string()) == 0);
  CHECK(slurp(dir / "r" / "results.csv") == slurp(dir / "a" / "results.csv"));
  CHECK(run_cli("report --results " + data + "/bad_config.json --out " + (dir / "r2").string()) == 2);

  // Circuit override: the regular layout file reproduces the built-in export.
  REQUIRE(run_cli("catalog --scheme regular --out " + (dir / "cat").string()) == 0);
  REQUIRE(run_cli("catalog --scheme regular --circuit " + data + "/regular.circuit --out " + (dir / "cat2").string()) ==
          0);
  CHECK(slurp(dir / "cat" / "regular_ZZ.txt") == slurp(dir / "cat2" / "regular_ZZ.txt"));
  CHECK(slurp(dir / "cat" / "regular_XX.txt") == slurp(data + "/regular_XX.txt"));
  CHECK(run_cli("catalog --scheme regular --circuit " + data + "/bad_config.json") == 2);
  CHECK(run_cli("joint-check --scheme phi_plus") == 0);
}
