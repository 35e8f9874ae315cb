// scdtns: generate synthetic data, train and apply nearest-subspace models in
// signed-CDT space, and run accuracy-vs-train-size benchmarks.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scdtns/classifier.hpp"
#include "scdtns/eval.hpp"
#include "scdtns/io.hpp"
#include "scdtns/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool ood = false;
  std::string train_sizes;
  std::optional<double> rank_cutoff;
  std::optional<std::size_t> max_rank;
  std::optional<std::size_t> grid_m;
  std::optional<std::size_t> n_train;
  std::optional<std::size_t> n_test;
  bool no_mean_removal = false;
  std::string data_path;
  std::string model_path;
};

json load_config(const Options& o) {
  if (o.config_path.empty()) return json::object();
  json j = scdtns::io::read_json(o.config_path);
  if (!j.is_object()) throw scdtns::Error(scdtns::ErrorCode::parse, "config must be a JSON object");
  return j;
}

scdtns::DatasetSpec resolve_dataset(const json& cfg, const Options& o) {
  auto spec = scdtns::io::dataset_spec_from_json(cfg.value("dataset", json::object()));
  if (o.seed) spec.seed = *o.seed;
  if (o.n_train) spec.n_train = *o.n_train;
  if (o.n_test) spec.n_test = *o.n_test;
  if (o.ood) spec.ood = true;
  return spec;
}

scdtns::TrainConfig resolve_train(const json& cfg, const Options& o) {
  auto tc = scdtns::io::train_config_from_json(cfg.value("train", json::object()));
  if (o.rank_cutoff) tc.rank.cutoff = *o.rank_cutoff;
  if (o.max_rank) tc.rank.max_rank = *o.max_rank;
  if (o.grid_m) tc.grid_m = *o.grid_m;
  if (o.no_mean_removal) tc.mean_removal = false;
  return tc;
}

std::string resolve_path(const json& cfg, const char* key, const std::string& flag) {
  if (!flag.empty()) return flag;
  return cfg.value(key, std::string{});
}

fs::path prepare_out_dir(const json& cfg, const Options& o, const fs::path& fallback) {
  fs::path dir = resolve_path(cfg, "out", o.out_dir);
  if (dir.empty()) dir = fallback;
  if (dir.empty()) dir = ".";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw scdtns::Error(scdtns::ErrorCode::io, "cannot create output directory " + dir.string());
  return dir;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t v = 0;
    if (!scdtns::io::detail::parse_value(item, v) || v == 0)
      throw scdtns::Error(scdtns::ErrorCode::invalid_argument, "bad --train-sizes entry '" + item + "'");
    sizes.push_back(v);
  }
  if (sizes.empty()) throw scdtns::Error(scdtns::ErrorCode::invalid_argument, "--train-sizes is empty");
  return sizes;
}

std::vector<scdtns::LabeledSignal> read_nonempty(const std::string& path) {
  if (path.empty()) throw scdtns::Error(scdtns::ErrorCode::invalid_argument, "no input CSV given (--data)");
  auto rows = scdtns::io::read_signals(path);
  if (rows.empty()) throw scdtns::Error(scdtns::ErrorCode::parse, path + ": no signals");
  return rows;
}

int cmd_generate(const Options& o) {
  const json cfg = load_config(o);
  const auto spec = resolve_dataset(cfg, o);
  const fs::path dir = prepare_out_dir(cfg, o, {});
  const auto data = scdtns::generate(spec);
  scdtns::io::write_signals(dir / "train.csv", data.train);
  scdtns::io::write_signals(dir / "test.csv", data.test);
  scdtns::io::write_json(dir / "spec.json", scdtns::io::to_json(spec));
  scdtns::io::write_json(dir / "config.json",
                         json{{"command", "generate"}, {"dataset", scdtns::io::to_json(spec)},
                              {"out", dir.string()}});
  std::cout << "wrote " << data.train.size() << " train and " << data.test.size()
            << " test signals to " << dir.string() << "\n";
  return kOk;
}

int cmd_train(const Options& o) {
  const json cfg = load_config(o);
  const auto tc = resolve_train(cfg, o);
  const std::string data_path = resolve_path(cfg, "data", o.data_path);
  std::string model_path = resolve_path(cfg, "model", o.model_path);
  const auto rows = read_nonempty(data_path);

  const fs::path dir = prepare_out_dir(cfg, o, model_path.empty() ? fs::path{} : fs::path(model_path).parent_path());
  if (model_path.empty()) model_path = (dir / "model.scdtns").string();

  const auto model = scdtns::train(rows, tc);
  scdtns::save(model, model_path);
  scdtns::io::write_json(dir / "config.json",
                         json{{"command", "train"}, {"train", scdtns::io::to_json(tc)},
                              {"data", data_path}, {"model", model_path}, {"out", dir.string()}});
  std::cout << "grid m = " << model.grid.m() << ", classes = " << model.class_count() << "\n";
  for (const auto& sub : model.subspaces)
    std::cout << "class " << sub.label() << ": rank " << sub.rank() << "\n";
  std::cout << "model written to " << model_path << "\n";
  return kOk;
}

int cmd_predict(const Options& o) {
  const json cfg = load_config(o);
  const std::string data_path = resolve_path(cfg, "data", o.data_path);
  const std::string model_path = resolve_path(cfg, "model", o.model_path);
  if (model_path.empty()) throw scdtns::Error(scdtns::ErrorCode::invalid_argument, "no model given (--model)");
  const auto model = scdtns::load(model_path);
  const auto rows = read_nonempty(data_path);
  const fs::path dir = prepare_out_dir(cfg, o, {});

  std::vector<scdtns::Signal> signals;
  signals.reserve(rows.size());
  for (const auto& r : rows) signals.push_back(r.signal);
  const auto predictions = scdtns::predict_all(model, signals);
  scdtns::detail::write_file_atomic(dir / "predictions.csv",
                                    scdtns::io::format_predictions(predictions, model.class_count()));
  scdtns::io::write_json(dir / "config.json",
                         json{{"command", "predict"}, {"data", data_path}, {"model", model_path},
                              {"out", dir.string()}});

  const bool labeled = std::all_of(rows.begin(), rows.end(), [&](const auto& r) {
    return r.label >= 0 && static_cast<std::size_t>(r.label) < model.class_count();
  });
  std::cout << "predicted " << predictions.size() << " signals -> "
            << (dir / "predictions.csv").string() << "\n";
  if (labeled) {
    std::vector<scdtns::LabelPair> pairs(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) pairs[i] = {rows[i].label, predictions[i].label};
    const auto m = scdtns::score(pairs, model.class_count());
    std::cout << "accuracy " << m.accuracy << ", macro-F1 " << m.macro_f1 << "\n";
  }
  return kOk;
}

int cmd_benchmark(const Options& o) {
  const json cfg = load_config(o);
  auto spec = resolve_dataset(cfg, o);
  const auto tc = resolve_train(cfg, o);
  std::vector<std::size_t> sizes{1, 2, 4, 8, 16, 32, 64};
  if (!o.train_sizes.empty())
    sizes = parse_sizes(o.train_sizes);
  else if (cfg.contains("train_sizes"))
    sizes = cfg.at("train_sizes").get<std::vector<std::size_t>>();
  const bool ood = o.ood || cfg.value("ood", false);
  spec.n_train = *std::max_element(sizes.begin(), sizes.end());
  spec.ood = false;
  const fs::path dir = prepare_out_dir(cfg, o, {});

  auto run = [&](bool ood_mode, const char* file) {
    const auto rows = scdtns::sweep(spec, sizes, ood_mode, tc);
    scdtns::detail::write_file_atomic(dir / file, scdtns::io::format_sweep(rows));
    std::cout << (ood_mode ? "out-of-distribution" : "in-distribution") << " -> "
              << (dir / file).string() << "\n";
    std::cout << "train_size  accuracy  macro_f1\n";
    for (const auto& r : rows) {
      char line[96];
      std::snprintf(line, sizeof line, "%10zu  %8.4f  %8.4f\n", r.train_size, r.metrics.accuracy,
                    r.metrics.macro_f1);
      std::cout << line;
    }
  };
  run(false, "sweep_in.csv");
  if (ood) run(true, "sweep_ood.csv");

  scdtns::io::write_json(dir / "config.json",
                         json{{"command", "benchmark"}, {"dataset", scdtns::io::to_json(spec)},
                              {"train", scdtns::io::to_json(tc)}, {"train_sizes", sizes},
                              {"ood", ood}, {"out", dir.string()}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed-CDT nearest-subspace signal classification"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd->add_option("--out", o.out_dir, "Output directory");
  };
  auto add_dataset = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "RNG seed (u64)");
    cmd->add_flag("--ood", o.ood, "Use the out-of-distribution warp regime for test data");
    cmd->add_option("--n-train", o.n_train, "Training signals per class");
    cmd->add_option("--n-test", o.n_test, "Test signals per class");
  };
  auto add_training = [&](CLI::App* cmd) {
    cmd->add_option("--rank-cutoff", o.rank_cutoff, "Relative singular-value cutoff");
    cmd->add_option("--max-rank", o.max_rank, "Cap on retained subspace rank");
    cmd->add_option("--grid-m", o.grid_m, "Transform grid size");
    cmd->add_flag("--no-mean-removal", o.no_mean_removal, "Skip mean removal before the transform");
  };

  auto* gen = app.add_subcommand("generate", "Write a synthetic train/test dataset");
  add_common(gen);
  add_dataset(gen);

  auto* tr = app.add_subcommand("train", "Train a model from a signal CSV");
  add_common(tr);
  add_training(tr);
  tr->add_option("--data", o.data_path, "Training CSV");
  tr->add_option("--model", o.model_path, "Model output path (default <out>/model.scdtns)");

  auto* pr = app.add_subcommand("predict", "Classify signals from a CSV");
  add_common(pr);
  pr->add_option("--data", o.data_path, "Input CSV");
  pr->add_option("--model", o.model_path, "Model file");

  auto* bench = app.add_subcommand("benchmark", "Accuracy against training-set size");
  add_common(bench);
  add_dataset(bench);
  add_training(bench);
  bench->add_option("--train-sizes", o.train_sizes, "Comma-separated sizes, e.g. 1,2,4,8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (tr->parsed()) return cmd_train(o);
    if (pr->parsed()) return cmd_predict(o);
    if (bench->parsed()) return cmd_benchmark(o);
  } catch (const scdtns::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
