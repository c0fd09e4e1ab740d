// Copyright 2026 The dvdq Authors. All Rights Reserved.
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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dvdq/arq.h"
#include "dvdq/error.h"
#include "dvdq/fileio.h"
#include "dvdq/hadamard.h"
#include "dvdq/manifest.h"
#include "dvdq/npy.h"
#include "dvdq/pack.h"
#include "dvdq/pbq.h"
#include "dvdq/quant.h"
#include "dvdq/sim.h"
#include "dvdq/svg.h"

namespace dvdq::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kQuantizeSchema = "dvdq.quantize.v1";
constexpr const char* kEvalArqSchema = "dvdq.eval-arq.v1";
constexpr const char* kSimulateSchema = "dvdq.simulate.v1";
constexpr const char* kSweepSchema = "dvdq.sweep.v1";
constexpr std::size_t kHistogramBins = 64;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Layer names become file stems; anything outside [A-Za-z0-9._-] maps to '_'.
std::string file_stem(const std::string& name) {
  std::string s = name;
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  if (s.empty() || s == "." || s == "..") s = "_" + s;
  return s;
}

// Creates the output directory and refuses to clobber any planned artifact
// unless forced. Checks everything before anything is written.
class Outputs {
 public:
  Outputs(fs::path dir, bool force, std::vector<std::string> names)
      : dir_(std::move(dir)) {
    if (dir_.empty()) throw UsageError("--out is required");
    std::set<std::string> seen;
    for (const auto& n : names)
      if (!seen.insert(n).second) throw ValidationError("two outputs map to the same file: " + n);
    std::error_code ec;
    if (fs::exists(dir_, ec) && !fs::is_directory(dir_, ec))
      throw ValidationError(dir_.string() + " exists and is not a directory");
    if (!force) {
      for (const auto& n : names)
        if (fs::exists(dir_ / n, ec))
          throw ValidationError("refusing to overwrite " + (dir_ / n).string() +
                                " (pass --force)");
    }
    fs::create_directories(dir_, ec);
    if (ec) throw IoError(dir_.string() + ": cannot create directory: " + ec.message());
  }

  fs::path path(const std::string& name) const { return dir_ / name; }
  void text(const std::string& name, const std::string& content) const {
    write_file_text(dir_ / name, content);
  }

 private:
  fs::path dir_;
};

json histogram_json(double lo, double hi, const std::vector<std::uint64_t>& counts) {
  return {{"lo", lo}, {"hi", hi}, {"counts", counts}};
}

// ---------------------------------------------------------------- quantize

struct QuantizeOptions {
  std::string manifest;
  std::string method = "pbq";
  int bits_w = 0;  // 0: per-layer bits from the manifest
  int steps = PbqConfig::kDefaultGrid;
  std::string out;
  bool force = false;
};

template <typename E>
[[noreturn]] void rethrow_for_layer(const std::string& layer, const E& e) {
  throw E("layer '" + layer + "': " + e.what());
}

Tensor2D load_layer(const LayerEntry& l) {
  try {
    Tensor2D w = load_npy(l.weight_file);
    if (w.rows() != l.rows || w.cols() != l.cols)
      throw ValidationError("weight shape " + std::to_string(w.rows()) + "x" +
                            std::to_string(w.cols()) + " does not match manifest " +
                            std::to_string(l.rows) + "x" + std::to_string(l.cols));
    return w;
  } catch (const IoError& e) {
    rethrow_for_layer(l.name, e);
  } catch (const FormatError& e) {
    rethrow_for_layer(l.name, e);
  } catch (const UnsupportedError& e) {
    rethrow_for_layer(l.name, e);
  } catch (const ValidationError& e) {
    rethrow_for_layer(l.name, e);
  }
}

int cmd_quantize(const QuantizeOptions& o, std::ostream& out) {
  if (o.method != "minmax" && o.method != "pbq")
    throw UsageError("--method must be minmax or pbq");
  if (o.steps < 0) throw UsageError("--steps must be >= 0");
  const Manifest m = load_manifest(o.manifest);
  if (m.layers.empty()) throw ValidationError("manifest has no layers");

  std::vector<std::string> names = {"report.json", "report.csv"};
  for (const auto& l : m.layers) {
    const int bits = o.bits_w > 0 ? o.bits_w : l.bits;
    if (!packable_bits(bits))
      throw ValidationError("layer '" + l.name + "': bits " + std::to_string(bits) +
                            " not in {2,3,4,6,8}");
    names.push_back(file_stem(l.name) + ".dvdq");
  }
  const Outputs outputs(o.out, o.force, names);

  json report;
  report["schema"] = kQuantizeSchema;
  report["model"] = m.model;
  report["method"] = o.method;
  report["steps"] = o.method == "pbq" ? o.steps : 0;
  report["layers"] = json::array();
  std::string csv = "layer,method,bits," + ErrorReport::csv_header() +
                    ",minmax_err_std,err_std_ratio,packed_bytes\n";

  double ratio_sum = 0.0;
  std::size_t ratio_count = 0;
  std::uint64_t fp16_bytes = 0, packed_bytes = 0;
  for (const auto& l : m.layers) {
    const Tensor2D w = load_layer(l);
    const int bits = o.bits_w > 0 ? o.bits_w : l.bits;

    const QuantParams mm_params = minmax_params(w, bits, ChannelAxis::Row);
    const QuantizedTensor mm_q = quantize(w, mm_params, ChannelAxis::Row);
    const Tensor2D mm_rec = dequantize(mm_q);
    const ErrorReport mm_rep = error_report(w, mm_rec);

    QuantizedTensor q = mm_q;
    ErrorReport rep = mm_rep;
    Tensor2D rec = mm_rec;
    if (o.method == "pbq") {
      PbqConfig cfg;
      cfg.bits = bits;
      cfg.steps = o.steps;
      PbqResult r = pbq_quantize(w, cfg);
      q = std::move(r.quantized);
      rep = std::move(r.report);
      rec = dequantize(q);
    }

    const std::string file = file_stem(l.name) + ".dvdq";
    const auto bytes = pack(q);
    write_file_bytes(outputs.path(file), bytes);
    fp16_bytes += std::uint64_t(w.size()) * 2;
    packed_bytes += bytes.size();

    // Bins span +-(largest min-max step), which depends only on the weights
    // and bit width, so reports from different methods share bin edges.
    double h = 0.0;
    for (std::size_t c = 0; c < mm_params.channels.size(); ++c) h = std::max(h, mm_params.step(c));
    if (!(h > 0.0)) h = 1.0;

    json entry;
    entry["name"] = l.name;
    entry["file"] = file;
    entry["rows"] = w.rows();
    entry["cols"] = w.cols();
    entry["bits"] = bits;
    entry["packed_bytes"] = bytes.size();
    entry["memory_ratio"] = memory_ratio(bytes);
    entry["report"] = rep.to_json();
    entry["minmax_report"] = mm_rep.to_json();
    json ratio = nullptr;
    if (mm_rep.err_std > 0.0) {
      ratio = rep.err_std / mm_rep.err_std;
      ratio_sum += rep.err_std / mm_rep.err_std;
      ++ratio_count;
    }
    entry["err_std_ratio"] = ratio;
    entry["histogram"] = histogram_json(-h, h, error_histogram(w, rec, -h, h, kHistogramBins));
    entry["minmax_histogram"] =
        histogram_json(-h, h, error_histogram(w, mm_rec, -h, h, kHistogramBins));
    report["layers"].push_back(entry);

    csv += l.name + "," + o.method + "," + std::to_string(bits) + "," + rep.csv_row() + "," +
           fmt(mm_rep.err_std) + "," +
           (ratio.is_null() ? std::string("nan") : fmt(ratio.get<double>())) + "," +
           std::to_string(bytes.size()) + "\n";
  }

  report["summary"] = {
      {"layers", m.layers.size()},
      {"mean_err_std_ratio", ratio_count ? json(ratio_sum / double(ratio_count)) : json(nullptr)},
      {"packed_bytes", packed_bytes},
      {"memory_ratio", packed_bytes ? double(fp16_bytes) / double(packed_bytes) : 0.0}};
  outputs.text("report.json", dump(report));
  outputs.text("report.csv", csv);
  out << "quantized " << m.layers.size() << " layers (" << o.method << ") -> " << o.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- eval-arq

struct EvalArqOptions {
  std::vector<std::string> inputs;
  int bits_a = 4;
  std::string out;
  bool force = false;
};

double rel_error(const Tensor2D& ref, const Tensor2D& approx) {
  const double n = frobenius(ref);
  const double d = frobenius_diff(ref, approx);
  return n > 0.0 ? d / n : d;
}

int cmd_eval_arq(const EvalArqOptions& o, std::ostream& out) {
  if (o.inputs.empty()) throw UsageError("eval-arq needs at least one .npy input");
  if (o.bits_a < 2 || o.bits_a > 8) throw UsageError("--bits-a must be in [2, 8]");
  const Outputs outputs(o.out, o.force, {"arq.json", "arq.csv", "arq.svg"});

  json report;
  report["schema"] = kEvalArqSchema;
  report["bits_a"] = o.bits_a;
  report["inputs"] = json::array();
  std::string csv = "input,rows,cols,pre_ratio,post_ratio,minmax_rel_err,rotate_only_rel_err,"
                    "arq_rel_err\n";
  std::vector<std::string> labels;
  svg::Series pre{"before rotation", {}, {}}, post{"after rotation", {}, {}};

  for (const auto& in : o.inputs) {
    const Tensor2D x = load_npy(in);
    const HadamardContext ctx(x.cols());
    const RangeDiagnostic d = outlier_redistribution(x, ctx);
    const Tensor2D xr = fht_rows(x, ctx);
    const double e_mm = rel_error(x, fake_quantize_per_tensor(x, o.bits_a));
    const double e_rot = rel_error(xr, fake_quantize_per_tensor(xr, o.bits_a));
    const double e_arq =
        rel_error(xr, arq_reconstruct_activation(arq_quantize_activation(x, ctx, o.bits_a)));
    const std::string name = fs::path(in).filename().string();

    report["inputs"].push_back({{"input", name},
                                {"rows", x.rows()},
                                {"cols", x.cols()},
                                {"pre_ratio", d.pre_ratio},
                                {"post_ratio", d.post_ratio},
                                {"pre_ranges", d.pre_ranges},
                                {"post_ranges", d.post_ranges},
                                {"minmax_rel_err", e_mm},
                                {"rotate_only_rel_err", e_rot},
                                {"arq_rel_err", e_arq}});
    csv += name + "," + std::to_string(x.rows()) + "," + std::to_string(x.cols()) + "," +
           fmt(d.pre_ratio) + "," + fmt(d.post_ratio) + "," + fmt(e_mm) + "," + fmt(e_rot) + "," +
           fmt(e_arq) + "\n";
    labels.push_back(name);
    pre.y.push_back(d.pre_ratio);
    post.y.push_back(d.post_ratio);
  }

  outputs.text("arq.json", dump(report));
  outputs.text("arq.csv", csv);
  outputs.text("arq.svg", svg::bar_chart("Column range max/median", labels, {pre, post}));
  out << "evaluated " << o.inputs.size() << " activation dumps -> " << o.out << "\n";
  return kOk;
}

// ---------------------------------------------------------- simulate/sweep

struct SimOptions {
  std::string config;
  std::string method;      // weight method override
  std::string act_method;  // activation method override
  std::string scheduler;
  int bits_w = 0;
  int bits_a = 0;
  int steps = -1;       // PBQ steps
  int timesteps = 0;    // denoising steps
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::vector<double> deltas;
  std::string out;
  bool force = false;
};

sim::ModelConfig model_from_json(const json& j, std::uint64_t run_seed) {
  sim::ModelConfig m;
  m.seed = run_seed;
  if (j.is_null()) return m;
  if (!j.is_object()) throw ValidationError("\"model\" must be an object");
  m.hidden = j.value("hidden", m.hidden);
  m.depth = j.value("depth", m.depth);
  m.weight_gain = j.value("weight_gain", m.weight_gain);
  m.outlier_frac = j.value("outlier_frac", m.outlier_frac);
  m.outlier_scale = j.value("outlier_scale", m.outlier_scale);
  m.seed = j.value("seed", m.seed);
  if (m.hidden == 0 || m.depth == 0) throw ValidationError("model hidden and depth must be > 0");
  return m;
}

json model_to_json(const sim::ModelConfig& m) {
  return {{"hidden", m.hidden},       {"depth", m.depth},
          {"weight_gain", m.weight_gain}, {"outlier_frac", m.outlier_frac},
          {"outlier_scale", m.outlier_scale}, {"seed", m.seed}};
}

std::pair<sim::RunConfig, sim::ModelConfig> resolve_sim(const SimOptions& o) {
  json j = json::object();
  if (!o.config.empty()) {
    try {
      j = json::parse(read_file_text(o.config));
    } catch (const json::parse_error& e) {
      throw FormatError(o.config + ": " + e.what());
    }
    if (!j.is_object()) throw ValidationError(o.config + ": config must be a JSON object");
  }
  sim::RunConfig cfg;
  try {
    cfg = sim::RunConfig::from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(o.config + ": " + e.what());
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.method.empty()) {
    if (o.method != "minmax" && o.method != "pbq")
      throw UsageError("--method must be minmax or pbq");
    cfg.weight_method = sim::weight_method_from_string(o.method);
  }
  if (!o.act_method.empty()) cfg.activation_method = sim::activation_method_from_string(o.act_method);
  if (!o.scheduler.empty()) cfg.scheduler.kind = sim::scheduler_from_string(o.scheduler);
  if (o.bits_w > 0) cfg.weight_bits = o.bits_w;
  if (o.bits_a > 0) cfg.scheduler.fixed_bits = o.bits_a;
  if (o.steps >= 0) cfg.pbq_steps = o.steps;
  if (o.timesteps > 0) cfg.steps = std::size_t(o.timesteps);
  if (o.delta) cfg.scheduler.delta = *o.delta;
  cfg.validate();
  sim::ModelConfig mc;
  try {
    mc = model_from_json(j.contains("model") ? j["model"] : json(nullptr), cfg.seed);
  } catch (const json::exception& e) {
    throw ValidationError(o.config + ": model: " + e.what());
  }
  return {cfg, mc};
}

int cmd_simulate(const SimOptions& o, std::ostream& out) {
  auto [cfg, mc] = resolve_sim(o);
  const Outputs outputs(o.out, o.force, {"results.json", "schedule.csv", "drift.svg"});
  const sim::ToyModel model = sim::ToyModel::build(mc);
  const sim::RunResult r = sim::run_denoise(model, cfg);

  json j;
  j["schema"] = kSimulateSchema;
  j["config"] = cfg.to_json();
  j["model"] = model_to_json(mc);
  j["result"] = r.to_json();
  outputs.text("results.json", dump(j));
  outputs.text("schedule.csv", r.schedule.to_csv());

  svg::Series drift{"drift", {}, r.drift_trace};
  for (std::size_t i = 0; i < r.drift_trace.size(); ++i) drift.x.push_back(double(i + 1));
  outputs.text("drift.svg", svg::line_chart("Output drift per step", "step", "l1 drift", {drift}));
  out << "final_mse " << fmt(r.final_mse) << " average_bits " << fmt(r.average_bits) << "\n";
  return kOk;
}

std::vector<double> default_deltas() {
  std::vector<double> d = {0.0};
  for (int i = 0; i <= 16; ++i) d.push_back(1e-4 * std::pow(10.0, i / 4.0));
  d.push_back(1e9);
  return d;
}

int cmd_sweep(const SimOptions& o, std::ostream& out) {
  auto [cfg, mc] = resolve_sim(o);
  std::vector<double> deltas = o.deltas.empty() ? default_deltas() : o.deltas;
  for (double d : deltas)
    if (!(d >= 0.0) || !std::isfinite(d)) throw UsageError("--deltas must be finite and >= 0");
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  const Outputs outputs(o.out, o.force, {"sweep.json", "sweep.csv", "sweep.svg"});
  const sim::ToyModel model = sim::ToyModel::build(mc);
  const auto rows = sim::delta_sweep(model, cfg, deltas);

  json j;
  j["schema"] = kSweepSchema;
  j["config"] = cfg.to_json();
  j["model"] = model_to_json(mc);
  j["rows"] = json::array();
  svg::Series closed{"closed loop", {}, {}}, open{"open loop", {}, {}};
  for (const auto& r : rows) {
    j["rows"].push_back({{"delta", r.delta},
                         {"average_bits", r.average_bits},
                         {"open_loop_average_bits", r.open_loop_average_bits},
                         {"final_mse", r.final_mse}});
    // Log-ish axis: index position keeps 0 and 1e9 on the same chart.
    closed.x.push_back(double(closed.x.size()));
    closed.y.push_back(r.average_bits);
    open.x.push_back(double(open.x.size()));
    open.y.push_back(r.open_loop_average_bits);
  }
  outputs.text("sweep.json", dump(j));
  outputs.text("sweep.csv", sim::sweep_to_csv(rows));
  outputs.text("sweep.svg", svg::line_chart("Average activation bits vs threshold",
                                            "threshold index (ascending)", "average bits",
                                            {closed, open}));
  out << "swept " << rows.size() << " thresholds -> " << o.out << "\n";
  return kOk;
}

// ------------------------------------------------------------------ report

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string out;
  bool force = false;
};

json load_result(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
    throw ValidationError(path + ": not a dvdq result file (no schema)");
  return j;
}

std::vector<std::uint64_t> counts_of(const json& h) {
  return h.at("counts").get<std::vector<std::uint64_t>>();
}

int report_quantize(const ReportOptions& o, const std::vector<json>& docs, std::ostream& out) {
  // Layers must line up across inputs for an overlay to make sense.
  const json& first = docs.front()["layers"];
  for (std::size_t i = 1; i < docs.size(); ++i) {
    const json& ls = docs[i]["layers"];
    if (ls.size() != first.size())
      throw ValidationError(o.inputs[i] + ": layer count differs from " + o.inputs[0]);
    for (std::size_t k = 0; k < ls.size(); ++k) {
      if (ls[k]["name"] != first[k]["name"] || ls[k]["histogram"]["lo"] != first[k]["histogram"]["lo"] ||
          ls[k]["histogram"]["hi"] != first[k]["histogram"]["hi"])
        throw ValidationError(o.inputs[i] + ": layer '" + ls[k]["name"].get<std::string>() +
                              "' does not match " + o.inputs[0]);
    }
  }
  bool has_minmax = false;
  for (const auto& d : docs) has_minmax |= d["method"] == "minmax";

  std::vector<std::string> names = {"summary.csv", "err_std.svg"};
  for (const auto& l : first) names.push_back("hist_" + file_stem(l["name"]) + ".svg");
  const Outputs outputs(o.out, o.force, names);

  auto series_name = [&](std::size_t i) {
    return docs[i]["method"].get<std::string>() + " [" + std::to_string(i) + "]";
  };
  std::string csv = "input,method,layer,bits," + ErrorReport::csv_header() + "\n";
  std::vector<std::string> labels;
  std::vector<svg::Series> bars(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) bars[i].name = series_name(i);
  if (!has_minmax) bars.push_back({"minmax baseline", {}, {}});

  for (std::size_t k = 0; k < first.size(); ++k) {
    const std::string layer = first[k]["name"];
    labels.push_back(layer);
    std::vector<svg::HistogramSeries> hs;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const json& l = docs[i]["layers"][k];
      const ErrorReport rep = ErrorReport::from_json(l["report"]);
      csv += o.inputs[i] + "," +
             docs[i]["method"].get<std::string>() + "," + layer + "," +
             std::to_string(l["bits"].get<int>()) + "," + rep.csv_row() + "\n";
      hs.push_back({series_name(i), counts_of(l["histogram"])});
      bars[i].y.push_back(rep.err_std);
    }
    if (!has_minmax) {
      const json& l = docs[0]["layers"][k];
      hs.push_back({"minmax baseline", counts_of(l["minmax_histogram"])});
      bars.back().y.push_back(l["minmax_report"]["err_std"].get<double>());
    }
    const json& h = first[k]["histogram"];
    outputs.text("hist_" + file_stem(layer) + ".svg",
                 svg::histogram("Quantization error: " + layer, h["lo"].get<double>(),
                                h["hi"].get<double>(), hs));
  }
  outputs.text("summary.csv", csv);
  outputs.text("err_std.svg", svg::bar_chart("Error standard deviation per layer", labels, bars));
  out << "report over " << docs.size() << " quantize results -> " << o.out << "\n";
  return kOk;
}

int report_runs(const ReportOptions& o, const std::vector<json>& docs, std::ostream& out) {
  const Outputs outputs(o.out, o.force, {"summary.csv", "drift.svg"});
  std::string csv = "input,weight_method,activation_method,scheduler,final_mse,average_bits\n";
  std::vector<svg::Series> lines;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const json& c = docs[i]["config"];
    const json& r = docs[i]["result"];
    const std::string name = fs::path(o.inputs[i]).filename().string();
    csv += name + "," + c["weight_method"].get<std::string>() + "," +
           c["activation_method"].get<std::string>() + "," +
           c["scheduler"]["kind"].get<std::string>() + "," + fmt(r["final_mse"].get<double>()) +
           "," + fmt(r["average_bits"].get<double>()) + "\n";
    svg::Series s{c["weight_method"].get<std::string>() + "+" +
                      c["activation_method"].get<std::string>() + " [" + std::to_string(i) + "]",
                  {}, r["drift_trace"].get<std::vector<double>>()};
    for (std::size_t t = 0; t < s.y.size(); ++t) s.x.push_back(double(t + 1));
    lines.push_back(std::move(s));
  }
  outputs.text("summary.csv", csv);
  outputs.text("drift.svg", svg::line_chart("Output drift per step", "step", "l1 drift", lines));
  out << "report over " << docs.size() << " simulate results -> " << o.out << "\n";
  return kOk;
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
  if (o.inputs.empty()) throw UsageError("report needs at least one result file");
  std::vector<json> docs;
  for (const auto& p : o.inputs) docs.push_back(load_result(p));
  const std::string schema = docs.front()["schema"];
  for (std::size_t i = 1; i < docs.size(); ++i)
    if (docs[i]["schema"] != schema)
      throw ValidationError("mixed result schemas: " + o.inputs[0] + " is " + schema + ", " +
                            o.inputs[i] + " is " + docs[i]["schema"].get<std::string>());
  try {
    if (schema == kQuantizeSchema) return report_quantize(o, docs, out);
    if (schema == kSimulateSchema) return report_runs(o, docs, out);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed result file: ") + e.what());
  }
  throw ValidationError("report does not handle schema " + schema);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dvdq: data-free post-training quantization toolkit", "dvdq"};
  app.require_subcommand(1);

  QuantizeOptions qo;
  auto* quant = app.add_subcommand("quantize", "Quantize every layer of a manifest");
  quant->add_option("--manifest", qo.manifest, "Manifest JSON")->required();
  quant->add_option("--method", qo.method, "minmax or pbq")->check(CLI::IsMember({"minmax", "pbq"}));
  quant->add_option("--bits-w,--bits", qo.bits_w, "Weight bits (default: per layer)");
  quant->add_option("--steps", qo.steps, "PBQ shrink steps K");
  quant->add_option("--out", qo.out, "Output directory")->required();
  quant->add_flag("--force", qo.force, "Overwrite existing artifacts");

  EvalArqOptions eo;
  auto* eval = app.add_subcommand("eval-arq", "Rotation and scaling diagnostics on activations");
  eval->add_option("inputs", eo.inputs, ".npy activation dumps")->required();
  eval->add_option("--bits-a", eo.bits_a, "Activation bits");
  eval->add_option("--out", eo.out, "Output directory")->required();
  eval->add_flag("--force", eo.force, "Overwrite existing artifacts");

  SimOptions so;
  auto add_sim_flags = [&](CLI::App* c) {
    c->add_option("--config", so.config, "Run configuration JSON");
    c->add_option("--method", so.method, "Weight quantizer: minmax or pbq");
    c->add_option("--act-method", so.act_method,
                  "Activation quantizer: none, minmax, smoothquant, rotate-only, arq");
    c->add_option("--scheduler", so.scheduler, "fixed, gbs, stp, itp, abs or sba");
    c->add_option("--bits-w", so.bits_w, "Weight bits");
    c->add_option("--bits-a", so.bits_a, "Activation bits for the fixed scheduler");
    c->add_option("--steps", so.steps, "PBQ shrink steps K");
    c->add_option("--timesteps", so.timesteps, "Denoising steps T");
    c->add_option("--delta", so.delta, "GBS threshold");
    c->add_option("--seed", so.seed, "Seed");
    c->add_option("--out", so.out, "Output directory")->required();
    c->add_flag("--force", so.force, "Overwrite existing artifacts");
  };
  auto* simulate = app.add_subcommand("simulate", "Run the synthetic denoising harness");
  add_sim_flags(simulate);
  auto* sweep = app.add_subcommand("sweep-delta", "Sweep the GBS threshold");
  add_sim_flags(sweep);
  sweep->add_option("--deltas", so.deltas, "Comma-separated thresholds")->delimiter(',');

  ReportOptions ro;
  auto* report = app.add_subcommand("report", "Plots and tables from result files");
  report->add_option("inputs", ro.inputs, "report.json or results.json files");
  report->add_option("--out", ro.out, "Output directory")->required();
  report->add_flag("--force", ro.force, "Overwrite existing artifacts");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (quant->parsed()) return cmd_quantize(qo, out);
    if (eval->parsed()) return cmd_eval_arq(eo, out);
    if (simulate->parsed()) return cmd_simulate(so, out);
    if (sweep->parsed()) return cmd_sweep(so, out);
    if (report->parsed()) return cmd_report(ro, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  } catch (const FormatError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "unsupported input: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  err << app.help();
  return kUsage;
}

}  // namespace dvdq::cli
