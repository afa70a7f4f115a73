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

#include "fusionloss/report.hpp"

#include "fusionloss/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fusionloss {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw ContractError("format_number: conversion failed");
  return std::string(buf, end);
}

namespace {

std::string threshold_text(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string(kNoThreshold);
}

json range_json(const AxisRange& r) { return {{"min", r.min}, {"max", r.max}, {"points", r.points}}; }

AxisRange range_from(const json& j) {
  return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("points").get<int>()};
}

Axis axis_from(const json& j) {
  auto a = parse_axis(j.get<std::string>());
  if (!a) throw ContractError("results: unknown axis " + j.dump());
  return *a;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write " + path.string());
  out << content;
  if (!out) throw ContractError("failed writing " + path.string());
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ThresholdResult>& results) {
  out << "scheme,ancilla,p_succ,network,encoding,axis,threshold_value,units\n";
  for (const auto& r : results) {
    for (std::size_t a = 0; a < kAxes.size(); ++a) {
      out << r.summary.scheme << ',' << r.summary.ancilla << ',' << format_number(r.summary.p_succ)
          << ',' << network(r.network).name << ',' << to_string(r.encoding) << ','
          << to_string(kAxes[a]) << ',' << threshold_text(r.marginal[a]) << ',' << units(kAxes[a])
          << '\n';
    }
  }
}

void write_schemes_csv(std::ostream& out, const std::vector<ThresholdResult>& results) {
  out << "scheme,ancilla,modes,photons,p_succ,variant,beamsplitters,swaps,layers\n";
  std::vector<std::string> seen;
  for (const auto& r : results) {
    const auto& s = r.summary;
    if (std::find(seen.begin(), seen.end(), s.scheme) != seen.end()) continue;
    seen.push_back(s.scheme);
    for (int v = 0; v < 2; ++v) {
      out << s.scheme << ',' << s.ancilla << ',' << s.modes << ',' << s.photons << ','
          << format_number(s.p_succ) << ',' << (v == 0 ? "XX" : "ZZ") << ','
          << s.beamsplitters[static_cast<std::size_t>(v)] << ',' << s.swaps[static_cast<std::size_t>(v)]
          << ',' << s.layers[static_cast<std::size_t>(v)] << '\n';
    }
  }
}

std::string results_to_json(const std::vector<ThresholdResult>& results, bool include_slices) {
  json arr = json::array();
  for (const auto& r : results) {
    const auto& s = r.summary;
    json j;
    j["scheme"] = s.scheme;
    j["ancilla"] = s.ancilla;
    j["modes"] = s.modes;
    j["photons"] = s.photons;
    j["p_succ"] = s.p_succ;
    j["beamsplitters"] = {{"XX", s.beamsplitters[0]}, {"ZZ", s.beamsplitters[1]}};
    j["swaps"] = {{"XX", s.swaps[0]}, {"ZZ", s.swaps[1]}};
    j["layers"] = {{"XX", s.layers[0]}, {"ZZ", s.layers[1]}};
    j["network"] = network(r.network).name;
    j["encoding"] = to_string(r.encoding);
    json th = json::object();
    for (std::size_t a = 0; a < kAxes.size(); ++a) {
      th[to_string(kAxes[a])] = r.marginal[a] ? json(*r.marginal[a]) : json(kNoThreshold);
    }
    j["thresholds"] = th;
    if (include_slices) {
      json slices = json::array();
      for (const auto& sl : r.slices) {
        json sj;
        sj["x_axis"] = to_string(sl.x_axis);
        sj["y_axis"] = to_string(sl.y_axis);
        sj["x_range"] = range_json(sl.x_range);
        sj["y_range"] = range_json(sl.y_range);
        json samples = json::array();
        for (const auto& p : sl.samples)
          samples.push_back({p.x, p.y, p.p_loss, p.effective_erasure, p.correctable});
        sj["samples"] = std::move(samples);
        slices.push_back(std::move(sj));
      }
      j["slices"] = std::move(slices);
    }
    arr.push_back(std::move(j));
  }
  return json{{"results", arr}}.dump(1) + "\n";
}

std::vector<ThresholdResult> results_from_json(const std::string& text) {
  std::vector<ThresholdResult> out;
  try {
    const json root = json::parse(text);
    for (const auto& j : root.at("results")) {
      ThresholdResult r{};
      auto& s = r.summary;
      s.scheme = j.at("scheme").get<std::string>();
      s.ancilla = j.at("ancilla").get<std::string>();
      s.modes = j.at("modes").get<int>();
      s.photons = j.at("photons").get<int>();
      s.p_succ = j.at("p_succ").get<double>();
      for (const char* key : {"beamsplitters", "swaps", "layers"}) {
        auto& dst = std::string(key) == "beamsplitters" ? s.beamsplitters
                    : std::string(key) == "swaps"       ? s.swaps
                                                        : s.layers;
        dst = {j.at(key).at("XX").get<int>(), j.at(key).at("ZZ").get<int>()};
      }
      auto net = parse_network(j.at("network").get<std::string>());
      auto enc = parse_encoding(j.at("encoding").get<std::string>());
      if (!net || !enc) throw ContractError("results: unknown network or encoding");
      r.network = *net;
      r.encoding = *enc;
      for (std::size_t a = 0; a < kAxes.size(); ++a) {
        const auto& v = j.at("thresholds").at(to_string(kAxes[a]));
        if (v.is_number()) r.marginal[a] = v.get<double>();
      }
      if (j.contains("slices")) {
        for (const auto& sj : j.at("slices")) {
          SliceData sl{axis_from(sj.at("x_axis")), axis_from(sj.at("y_axis")),
                       range_from(sj.at("x_range")), range_from(sj.at("y_range")), {}};
          for (const auto& p : sj.at("samples"))
            sl.samples.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>(),
                                  p.at(3).get<double>(), p.at(4).get<bool>()});
          if (sl.samples.size() != static_cast<std::size_t>(sl.x_range.points * sl.y_range.points))
            throw ContractError("results: slice sample count does not match its grid");
          r.slices.push_back(std::move(sl));
        }
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ContractError(std::string("results: ") + e.what());
  }
  return out;
}

void write_slice_csv(std::ostream& out, const SliceData& slice) {
  out << to_string(slice.x_axis) << ',' << to_string(slice.y_axis)
      << ",p_loss,effective_erasure,correctable\n";
  for (const auto& p : slice.samples) {
    out << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(p.p_loss) << ','
        << format_number(p.effective_erasure) << ',' << (p.correctable ? 1 : 0) << '\n';
  }
}

std::vector<std::pair<double, double>> frontier(const SliceData& slice) {
  std::vector<std::pair<double, double>> line;
  const int nx = slice.x_range.points;
  const int ny = slice.y_range.points;
  for (int ix = 0; ix < nx; ++ix) {
    int last_ok = -1;
    for (int iy = 0; iy < ny && slice.at(ix, iy).correctable; ++iy) last_ok = iy;
    if (last_ok < 0) continue;
    const double x = slice.x_range.at(ix);
    if (last_ok == ny - 1) {
      line.emplace_back(x, slice.y_range.at(ny - 1));
    } else {
      line.emplace_back(x, 0.5 * (slice.y_range.at(last_ok) + slice.y_range.at(last_ok + 1)));
    }
  }
  return line;
}

void write_slice_svg(std::ostream& out, const SliceData& slice, const std::string& title) {
  constexpr double kLeft = 70, kTop = 40, kPlot = 400, kWidth = 500, kHeight = 500;
  const auto& xr = slice.x_range;
  const auto& yr = slice.y_range;
  auto px = [&](double x) { return kLeft + (x - xr.min) / (xr.max - xr.min) * kPlot; };
  auto py = [&](double y) { return kTop + kPlot - (y - yr.min) / (yr.max - yr.min) * kPlot; };
  const double cw = kPlot / (xr.points - 1);
  const double ch = kPlot / (yr.points - 1);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<title>" << title << "</title>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<g stroke=\"none\">\n";
  for (int ix = 0; ix < xr.points; ++ix) {
    for (int iy = 0; iy < yr.points; ++iy) {
      const auto& s = slice.at(ix, iy);
      // Cells are centred on samples and clipped to the plot box.
      const double x0 = std::max(kLeft, px(s.x) - cw / 2);
      const double x1 = std::min(kLeft + kPlot, px(s.x) + cw / 2);
      const double y0 = std::max(kTop, py(s.y) - ch / 2);
      const double y1 = std::min(kTop + kPlot, py(s.y) + ch / 2);
      out << "<rect x=\"" << format_number(x0) << "\" y=\"" << format_number(y0) << "\" width=\""
          << format_number(x1 - x0) << "\" height=\"" << format_number(y1 - y0) << "\" fill=\""
          << (s.correctable ? "#9ecae1" : "#f2f2f2") << "\"/>\n";
    }
  }
  out << "</g>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlot << "\" height=\"" << kPlot
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  const auto line = frontier(slice);
  if (!line.empty()) {
    out << "<polyline class=\"frontier\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << ' ';
      out << format_number(px(line[i].first)) << ',' << format_number(py(line[i].second));
    }
    out << "\"/>\n";
  }
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop + kPlot + 20 << "\">" << format_number(xr.min) << "</text>\n";
  out << "<text x=\"" << kLeft + kPlot << "\" y=\"" << kTop + kPlot + 20 << "\" text-anchor=\"end\">"
      << format_number(xr.max) << "</text>\n";
  out << "<text x=\"" << kLeft + kPlot / 2 << "\" y=\"" << kTop + kPlot + 40 << "\" text-anchor=\"middle\">"
      << to_string(slice.x_axis) << " [" << units(slice.x_axis) << "]</text>\n";
  out << "<text x=\"" << kLeft - 5 << "\" y=\"" << kTop + kPlot << "\" text-anchor=\"end\">"
      << format_number(yr.min) << "</text>\n";
  out << "<text x=\"" << kLeft - 5 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">"
      << format_number(yr.max) << "</text>\n";
  out << "<text transform=\"translate(20 " << kTop + kPlot / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << to_string(slice.y_axis) << " [" << units(slice.y_axis) << "]</text>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop - 15 << "\">" << title << "</text>\n";
  out << "</g>\n</svg>\n";
}

std::string slice_stem(const ThresholdResult& r, const SliceData& slice) {
  return "slice_" + r.summary.scheme + "_" + network(r.network).name + "_" + to_string(r.encoding) + "_" +
         to_string(slice.x_axis) + "_" + to_string(slice.y_axis);
}

std::vector<std::string> write_report(const std::vector<ThresholdResult>& results,
                                      const std::string& directory,
                                      const std::vector<std::string>& formats) {
  for (const auto& f : formats)
    if (f != "csv" && f != "json" && f != "svg") throw ContractError("unknown output format '" + f + "'");
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory)) throw ContractError("cannot create output directory " + directory);
  const fs::path dir(directory);
  std::vector<std::string> written;
  auto emit = [&](const fs::path& path, const std::string& content) {
    write_file(path, content);
    written.push_back(path.string());
  };
  auto has = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };

  if (has("csv")) {
    std::ostringstream table, schemes;
    write_results_csv(table, results);
    write_schemes_csv(schemes, results);
    emit(dir / "results.csv", table.str());
    emit(dir / "schemes.csv", schemes.str());
    for (const auto& r : results) {
      for (const auto& s : r.slices) {
        std::ostringstream text;
        write_slice_csv(text, s);
        emit(dir / (slice_stem(r, s) + ".csv"), text.str());
      }
    }
  }
  if (has("json")) emit(dir / "results.json", results_to_json(results));
  if (has("svg")) {
    for (const auto& r : results) {
      for (const auto& s : r.slices) {
        std::ostringstream text;
        write_slice_svg(text, s,
                        r.summary.scheme + " / " + network(r.network).name + " / " + to_string(r.encoding));
        emit(dir / (slice_stem(r, s) + ".svg"), text.str());
      }
    }
  }
  return written;
}

}  // namespace fusionloss
