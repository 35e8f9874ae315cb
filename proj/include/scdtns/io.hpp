#pragma once

// File formats shared by the CLI and the tests.
//
// Signal CSV: header `label,t_min,t_max,v0,...,v{n-1}`, one signal per row.
// Rows may differ in length; the header is sized for the longest row.
// Unlabeled rows carry label -1.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "scdtns/classifier.hpp"
#include "scdtns/error.hpp"
#include "scdtns/eval.hpp"
#include "scdtns/synthgen.hpp"

namespace scdtns::io {

/// Shortest representation that parses back to the same double.
inline void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

inline std::string format_signals(std::span<const LabeledSignal> rows) {
  std::size_t widest = 0;
  for (const auto& r : rows) widest = std::max(widest, r.signal.size());
  std::string out = "label,t_min,t_max";
  for (std::size_t i = 0; i < widest; ++i) out += ",v" + std::to_string(i);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.label);
    out += ',';
    append_number(out, r.signal.t_min());
    out += ',';
    append_number(out, r.signal.t_max());
    for (double v : r.signal.samples()) {
      out += ',';
      append_number(out, v);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_value(std::string_view text, T& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty();
}

}  // namespace detail

/// Parses signal CSV text. Row numbers in errors are 1-based file lines.
inline std::vector<LabeledSignal> parse_signals(std::string_view text) {
  std::vector<LabeledSignal> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.substr(0, 5) == "label") continue;
    }
    const auto fields = detail::split_fields(line);
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::parse, "row " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 5) throw fail("expected label, t_min, t_max and at least 2 samples");
    int label = 0;
    double t_min = 0.0, t_max = 0.0;
    if (!detail::parse_value(fields[0], label)) throw fail("label is not an integer");
    if (!detail::parse_value(fields[1], t_min) || !detail::parse_value(fields[2], t_max))
      throw fail("t_min/t_max are not numeric");
    std::vector<double> samples(fields.size() - 3);
    for (std::size_t i = 3; i < fields.size(); ++i)
      if (!detail::parse_value(fields[i], samples[i - 3]))
        throw fail("amplitude v" + std::to_string(i - 3) + " is not numeric");
    try {
      rows.push_back({Signal(std::move(samples), t_min, t_max), label});
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  return rows;
}

inline std::vector<LabeledSignal> read_signals(const std::filesystem::path& path) {
  return parse_signals(scdtns::detail::read_file(path));
}

inline void write_signals(const std::filesystem::path& path, std::span<const LabeledSignal> rows) {
  scdtns::detail::write_file_atomic(path, format_signals(rows));
}

inline std::string format_sweep(std::span<const SweepRow> rows) {
  std::string out = "train_size,accuracy,macro_f1\n";
  for (const auto& r : rows) {
    out += std::to_string(r.train_size);
    out += ',';
    append_number(out, r.metrics.accuracy);
    out += ',';
    append_number(out, r.metrics.macro_f1);
    out += '\n';
  }
  return out;
}

/// Parses a sweep CSV back into (train_size, accuracy, macro_f1) rows.
inline std::vector<SweepRow> parse_sweep(std::string_view text) {
  std::vector<SweepRow> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = detail::trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (++line_no == 1 || line.empty()) continue;
    const auto f = detail::split_fields(line);
    SweepRow row{0, {}};
    if (f.size() != 3 || !detail::parse_value(f[0], row.train_size) ||
        !detail::parse_value(f[1], row.metrics.accuracy) ||
        !detail::parse_value(f[2], row.metrics.macro_f1))
      throw Error(ErrorCode::parse, "sweep row " + std::to_string(line_no) + " is malformed");
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string format_predictions(std::span<const Prediction> predictions,
                                      std::size_t class_count) {
  std::string out = "row,predicted";
  for (std::size_t c = 0; c < class_count; ++c) out += ",d2_" + std::to_string(c);
  out += '\n';
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(predictions[i].label);
    for (double d : predictions[i].distances_sq) {
      out += ',';
      append_number(out, d);
    }
    out += '\n';
  }
  return out;
}

// ---- JSON -----------------------------------------------------------------

using nlohmann::json;

inline json to_json(const WarpRegime& r) {
  return json{{"magnitude", r.magnitude}, {"center_scale", r.center_scale}};
}

inline WarpRegime warp_regime_from_json(const json& j, WarpRegime base = {}) {
  base.magnitude = j.value("magnitude", base.magnitude);
  base.center_scale = j.value("center_scale", base.center_scale);
  return base;
}

inline json to_json(const DatasetSpec& spec) {
  json classes = json::array();
  for (const auto& c : spec.classes)
    classes.push_back({{"kind", std::string(to_string(c.kind))},
                       {"center", c.params.center},
                       {"width", c.params.width},
                       {"frequency", c.params.frequency},
                       {"phase", c.params.phase}});
  return json{{"classes", classes},
              {"n_train", spec.n_train},
              {"n_test", spec.n_test},
              {"in_regime", to_json(spec.in_regime)},
              {"out_regime", to_json(spec.out_regime)},
              {"ood", spec.ood},
              {"seed", spec.seed},
              {"n", spec.n},
              {"t_min", spec.t_min},
              {"t_max", spec.t_max},
              {"rng", std::string(kRngName)}};
}

/// Missing keys keep the values in `base`.
inline DatasetSpec dataset_spec_from_json(const json& j, DatasetSpec base = {}) {
  try {
    if (j.contains("classes")) {
      base.classes.clear();
      for (const auto& c : j.at("classes")) {
        PrototypeSpec p;
        p.kind = parse_prototype_kind(c.at("kind").get<std::string>());
        p.params.center = c.value("center", p.params.center);
        p.params.width = c.value("width", p.params.width);
        p.params.frequency = c.value("frequency", p.params.frequency);
        p.params.phase = c.value("phase", p.params.phase);
        base.classes.push_back(p);
      }
    }
    base.n_train = j.value("n_train", base.n_train);
    base.n_test = j.value("n_test", base.n_test);
    if (j.contains("in_regime")) base.in_regime = warp_regime_from_json(j.at("in_regime"), base.in_regime);
    if (j.contains("out_regime"))
      base.out_regime = warp_regime_from_json(j.at("out_regime"), base.out_regime);
    base.ood = j.value("ood", base.ood);
    base.seed = j.value("seed", base.seed);
    base.n = j.value("n", base.n);
    base.t_min = j.value("t_min", base.t_min);
    base.t_max = j.value("t_max", base.t_max);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("dataset spec: ") + e.what());
  }
  return base;
}

inline json to_json(const TrainConfig& c) {
  json j{{"mean_removal", c.mean_removal}, {"rank_cutoff", c.rank.cutoff}};
  j["grid_m"] = c.grid_m ? json(*c.grid_m) : json(nullptr);
  j["max_rank"] = c.rank.max_rank ? json(*c.rank.max_rank) : json(nullptr);
  return j;
}

inline TrainConfig train_config_from_json(const json& j, TrainConfig base = {}) {
  try {
    base.mean_removal = j.value("mean_removal", base.mean_removal);
    base.rank.cutoff = j.value("rank_cutoff", base.rank.cutoff);
    if (j.contains("grid_m"))
      base.grid_m = j.at("grid_m").is_null() ? std::nullopt
                                             : std::optional<std::size_t>(j.at("grid_m").get<std::size_t>());
    if (j.contains("max_rank"))
      base.rank.max_rank = j.at("max_rank").is_null()
                               ? std::nullopt
                               : std::optional<std::size_t>(j.at("max_rank").get<std::size_t>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("train config: ") + e.what());
  }
  return base;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  scdtns::detail::write_file_atomic(path, j.dump(2) + "\n");
}

inline json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(scdtns::detail::read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
}

}  // namespace scdtns::io
