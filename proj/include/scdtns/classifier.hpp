#pragma once

// Nearest-subspace classification in signed-CDT space.
//
// Training maps every sample to its mass-dropped transform and spans one
// subspace per class; prediction picks the class with the smallest squared
// residual after orthogonal projection.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scdtns/error.hpp"
#include "scdtns/parallel.hpp"
#include "scdtns/signal.hpp"
#include "scdtns/subspace.hpp"
#include "scdtns/transform.hpp"

namespace scdtns {

struct LabeledSignal {
  Signal signal;
  int label = -1;
};

struct TrainConfig {
  /// Transform grid size; defaults to the length of the first training signal.
  std::optional<std::size_t> grid_m;
  bool mean_removal = true;
  RankPolicy rank;
};

struct NSModel {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::vector<ClassSubspace> subspaces;
  TransformGrid grid{2};
  bool mean_removal = true;
  std::uint32_t format_version = kFormatVersion;

  std::size_t class_count() const noexcept { return subspaces.size(); }
};

struct Prediction {
  int label = -1;
  std::vector<double> distances_sq;
};

/// Preprocess, resample to the grid length, transform, and drop the masses.
inline FeatureVector extract_features(const Signal& s, TransformGrid grid, bool mean_removal) {
  Signal x = resample(s, grid.m());
  if (mean_removal) x = remove_mean(x);
  return feature_vector(scdt_forward(x, grid));
}

inline NSModel train(std::span<const LabeledSignal> samples, const TrainConfig& config = {}) {
  if (samples.empty()) throw Error(ErrorCode::invalid_argument, "train: no samples");
  int max_label = -1;
  for (const auto& s : samples) {
    if (s.label < 0)
      throw Error(ErrorCode::invalid_argument,
                  "train: negative class label " + std::to_string(s.label));
    max_label = std::max(max_label, s.label);
  }
  const auto classes = static_cast<std::size_t>(max_label) + 1;

  std::vector<std::vector<std::size_t>> members(classes);
  for (std::size_t i = 0; i < samples.size(); ++i)
    members[static_cast<std::size_t>(samples[i].label)].push_back(i);
  for (std::size_t c = 0; c < classes; ++c)
    if (members[c].empty())
      throw Error(ErrorCode::invalid_argument,
                  "train: class " + std::to_string(c) + " has no samples");

  const TransformGrid grid(config.grid_m.value_or(samples.front().signal.size()));

  std::vector<FeatureVector> features(samples.size(), FeatureVector{{}, grid});
  parallel_for(samples.size(), [&](std::size_t i) {
    features[i] = extract_features(samples[i].signal, grid, config.mean_removal);
  });

  std::vector<std::optional<ClassSubspace>> built(classes);
  parallel_for(classes, [&](std::size_t c) {
    std::vector<FeatureVector> own;
    own.reserve(members[c].size());
    for (std::size_t i : members[c]) own.push_back(features[i]);
    built[c] = build_basis(own, config.rank, static_cast<int>(c));
  });

  NSModel model{{}, grid, config.mean_removal, NSModel::kFormatVersion};
  model.subspaces.reserve(classes);
  for (auto& b : built) model.subspaces.push_back(std::move(*b));
  return model;
}

inline Prediction predict_features(const NSModel& model, const FeatureVector& f) {
  Prediction p;
  p.distances_sq.reserve(model.class_count());
  for (const auto& sub : model.subspaces) p.distances_sq.push_back(projection_distance_sq(f, sub));
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.distances_sq.size(); ++c)
    if (p.distances_sq[c] < p.distances_sq[best]) best = c;
  p.label = static_cast<int>(best);
  return p;
}

inline Prediction predict(const NSModel& model, const Signal& s) {
  return predict_features(model, extract_features(s, model.grid, model.mean_removal));
}

inline std::vector<Prediction> predict_all(const NSModel& model, std::span<const Signal> signals) {
  std::vector<Prediction> out(signals.size());
  parallel_for(signals.size(), [&](std::size_t i) { out[i] = predict(model, signals[i]); });
  return out;
}

// Binary model file, all integers and floats little-endian:
//   "SCDTNS" | u32 format_version | u64 m | u8 mean_removal | u32 class_count
//   then per class: u64 rank, (2m x rank) f64 basis in row-major order.
namespace detail {

inline constexpr std::string_view kModelMagic = "SCDTNS";

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                               std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b)
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T get() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
    if (data_.size() - pos_ < sizeof(U))
      throw Error(ErrorCode::corrupt_file, "model file is truncated");
    U bits = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b)
      bits |= static_cast<U>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
    pos_ += sizeof(U);
    return std::bit_cast<T>(bits);
  }

  std::string_view take(std::size_t n) {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::corrupt_file, "model file is truncated");
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

/// Write to a sibling temp file, then rename over the destination.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::io, "cannot move output into place at " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace detail

inline std::string serialize(const NSModel& model) {
  std::string out(detail::kModelMagic);
  detail::put_le(out, model.format_version);
  detail::put_le(out, static_cast<std::uint64_t>(model.grid.m()));
  detail::put_le(out, static_cast<std::uint8_t>(model.mean_removal ? 1 : 0));
  detail::put_le(out, static_cast<std::uint32_t>(model.class_count()));
  for (const auto& sub : model.subspaces) {
    detail::put_le(out, static_cast<std::uint64_t>(sub.rank()));
    const auto& b = sub.basis();
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) detail::put_le(out, b(r, c));
  }
  return out;
}

inline NSModel deserialize(std::string_view bytes) {
  detail::Reader in(bytes);
  if (bytes.size() < detail::kModelMagic.size() || in.take(detail::kModelMagic.size()) != detail::kModelMagic)
    throw Error(ErrorCode::corrupt_file, "not a model file (bad magic)");
  const auto version = in.get<std::uint32_t>();
  if (version != NSModel::kFormatVersion)
    throw Error(ErrorCode::version_mismatch,
                "model format version " + std::to_string(version) +
                    " is not supported (expected version " +
                    std::to_string(NSModel::kFormatVersion) + ")");
  const auto m = in.get<std::uint64_t>();
  const auto flags = in.get<std::uint8_t>();
  const auto classes = in.get<std::uint32_t>();
  if (m < 2 || flags > 1 || classes == 0)
    throw Error(ErrorCode::corrupt_file, "model header is corrupt");

  const auto dim = 2 * m;
  NSModel model{{}, TransformGrid(m), flags == 1, version};
  for (std::uint32_t c = 0; c < classes; ++c) {
    const auto rank = in.get<std::uint64_t>();
    if (rank == 0 || rank > dim || in.remaining() / 8 / dim < rank)
      throw Error(ErrorCode::corrupt_file, "model basis for class " + std::to_string(c) + " is corrupt");
    Eigen::MatrixXd b(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index k = 0; k < b.cols(); ++k) b(r, k) = in.get<double>();
    model.subspaces.emplace_back(std::move(b), static_cast<int>(c));
  }
  if (in.remaining() != 0) throw Error(ErrorCode::corrupt_file, "model file has trailing bytes");
  return model;
}

inline void save(const NSModel& model, const std::filesystem::path& path) {
  detail::write_file_atomic(path, serialize(model));
}

inline NSModel load(const std::filesystem::path& path) {
  return deserialize(detail::read_file(path));
}

}  // namespace scdtns
