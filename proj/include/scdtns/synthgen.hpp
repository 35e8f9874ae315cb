#pragma once

// Synthetic benchmark: three apodized prototype waves deformed by random
// increasing quartic warps under the mass-preserving model s_g = g' * s(g).

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "scdtns/classifier.hpp"
#include "scdtns/error.hpp"
#include "scdtns/parallel.hpp"
#include "scdtns/signal.hpp"
#include "scdtns/transform.hpp"
#include "scdtns/warp.hpp"

namespace scdtns {

/// Name recorded in dataset metadata. Per-sample seeds come from splitmix64
/// mixing; draws come from std::mt19937_64, whose output sequence is fixed by
/// the standard. Uniform reals use the top 53 bits, never std distributions,
/// so datasets are identical across standard library implementations.
inline constexpr std::string_view kRngName = "mt19937_64/splitmix64-substreams/u53";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent substream keyed by (seed, a, b, c).
  static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return Rng(h);
  }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

enum class PrototypeKind { gabor, apodized_sawtooth, apodized_square };

inline std::string_view to_string(PrototypeKind k) {
  switch (k) {
    case PrototypeKind::gabor: return "gabor";
    case PrototypeKind::apodized_sawtooth: return "apodized_sawtooth";
    case PrototypeKind::apodized_square: return "apodized_square";
  }
  return "unknown";
}

inline PrototypeKind parse_prototype_kind(std::string_view name) {
  if (name == "gabor") return PrototypeKind::gabor;
  if (name == "apodized_sawtooth") return PrototypeKind::apodized_sawtooth;
  if (name == "apodized_square") return PrototypeKind::apodized_square;
  throw Error(ErrorCode::invalid_argument, "unknown prototype kind '" + std::string(name) + "'");
}

struct PrototypeParams {
  double center = 0.5;     // t0
  double width = 0.1;      // sigma of the Gaussian window
  double frequency = 6.0;  // f
  double phase = 0.0;      // phi0, radians
};

struct PrototypeSpec {
  PrototypeKind kind = PrototypeKind::gabor;
  PrototypeParams params;
};

/// Closed-form template phi(t).
inline std::function<double(double)> prototype_function(PrototypeKind kind, const PrototypeParams& p) {
  if (!(p.width > 0.0) || !(p.frequency > 0.0))
    throw Error(ErrorCode::invalid_argument, "prototype: width and frequency must be positive");
  auto window = [p](double t) {
    const double d = t - p.center;
    return std::exp(-d * d / (2.0 * p.width * p.width));
  };
  auto angle = [p](double t) {
    return 2.0 * std::numbers::pi * p.frequency * (t - p.center) + p.phase;
  };
  switch (kind) {
    case PrototypeKind::gabor:
      return [=](double t) { return window(t) * std::cos(angle(t)); };
    case PrototypeKind::apodized_sawtooth:
      return [=](double t) {
        const double cycles = angle(t) / (2.0 * std::numbers::pi);
        return window(t) * 2.0 * (cycles - std::floor(cycles + 0.5));
      };
    case PrototypeKind::apodized_square:
      return [=](double t) { return window(t) * (std::cos(angle(t)) >= 0.0 ? 1.0 : -1.0); };
  }
  throw Error(ErrorCode::invalid_argument, "prototype: unknown kind");
}

inline Signal prototype(PrototypeKind kind, const PrototypeParams& p, double t_min = 0.0,
                        double t_max = 1.0, std::size_t n = 512) {
  return Signal::sampled(prototype_function(kind, p), t_min, t_max, n);
}

inline Signal prototype(const PrototypeSpec& spec, double t_min, double t_max, std::size_t n) {
  return prototype(spec.kind, spec.params, t_min, t_max, n);
}

/// g'(t) phi(g(t)) sampled on the grid, with phi evaluated in closed form and
/// taken as zero outside [t_min, t_max]. Same model as apply_warp on the
/// sampled prototype, without interpolating across the jumps of the sawtooth
/// and square waves.
inline Signal warped_prototype(const PrototypeSpec& spec, const WarpPolynomial& g, double t_min,
                               double t_max, std::size_t n) {
  if (!g.increasing_on(t_min, t_max))
    throw Error(ErrorCode::non_increasing_warp, "warped_prototype: warp is not strictly increasing");
  const auto phi = prototype_function(spec.kind, spec.params);
  return Signal::sampled(
      [&](double t) {
        const double u = g(t);
        return u < t_min || u > t_max ? 0.0 : g.derivative(t) * phi(u);
      },
      t_min, t_max, n);
}

/// Coefficient law for identity-anchored warps g(t) = t + sum_k q_k t^k with
/// |q_k| <= magnitude * w_k. A nonzero center_scale in [0, 1) excludes the
/// inner band |q_k| < center_scale * magnitude * w_k.
struct WarpRegime {
  double magnitude = 0.1;
  double center_scale = 0.0;
};

inline constexpr std::array<double, 5> kWarpWeights{1.0, 1.0, 0.5, 0.25, 0.125};
inline constexpr int kMaxWarpRejections = 1000;

inline void check_regime(const WarpRegime& regime) {
  if (!(regime.magnitude >= 0.0) || !(regime.center_scale >= 0.0) || !(regime.center_scale < 1.0))
    throw Error(ErrorCode::invalid_argument,
                "warp regime: magnitude must be >= 0 and center_scale in [0, 1)");
}

/// One unchecked draw from the regime's coefficient law.
inline WarpPolynomial draw_warp_candidate(const WarpRegime& regime, Rng& rng, double t_min = 0.0,
                                          double t_max = 1.0) {
  WarpPolynomial g = WarpPolynomial::identity(t_min, t_max);
  for (std::size_t k = 0; k < kWarpWeights.size(); ++k) {
    const double bound = regime.magnitude * kWarpWeights[k];
    if (regime.center_scale > 0.0) {
      const double u = rng.uniform(-1.0, 1.0);
      const double mag = regime.center_scale + (1.0 - regime.center_scale) * std::abs(u);
      g.coeffs[k] += std::copysign(mag * bound, u);
    } else {
      g.coeffs[k] += rng.uniform(-bound, bound);
    }
  }
  return g;
}

/// Rejection sampling: redraw until g' > 0 on the check grid.
inline WarpPolynomial sample_warp(const WarpRegime& regime, Rng& rng, double t_min = 0.0,
                                  double t_max = 1.0) {
  check_regime(regime);
  for (int attempt = 0; attempt < kMaxWarpRejections; ++attempt) {
    WarpPolynomial g = draw_warp_candidate(regime, rng, t_min, t_max);
    if (g.increasing()) return g;
  }
  throw Error(ErrorCode::too_many_rejections, "sample_warp: magnitude too large for monotone warps");
}

struct DatasetSpec {
  std::vector<PrototypeSpec> classes{{PrototypeKind::gabor, {}},
                                     {PrototypeKind::apodized_sawtooth, {}},
                                     {PrototypeKind::apodized_square, {}}};
  std::size_t n_train = 16;
  std::size_t n_test = 100;
  WarpRegime in_regime{0.1, 0.0};
  WarpRegime out_regime{0.25, 0.0};
  bool ood = false;
  std::uint64_t seed = 0;
  std::size_t n = 512;
  double t_min = 0.0;
  double t_max = 1.0;

  void validate() const {
    if (classes.empty()) throw Error(ErrorCode::invalid_argument, "dataset spec: no classes");
    if (n_train < 1 || n_test < 1)
      throw Error(ErrorCode::invalid_argument, "dataset spec: n_train and n_test must be >= 1");
    check_regime(in_regime);
    check_regime(out_regime);
    if (ood && !(out_regime.magnitude > in_regime.magnitude))
      throw Error(ErrorCode::invalid_argument,
                  "dataset spec: out-distribution magnitude must exceed in-distribution magnitude");
    if (n < 2 || !(t_min < t_max))
      throw Error(ErrorCode::invalid_argument, "dataset spec: invalid sampling grid");
  }
};

struct Dataset {
  std::vector<LabeledSignal> train;
  std::vector<LabeledSignal> test;
};

enum class Split : std::uint64_t { train = 1, test = 2 };

/// Warp drawn for sample `index` of class `label` in the given split. Each
/// (split, class, index) owns an RNG substream, so any prefix of a split is
/// independent of the split's total size.
inline WarpPolynomial warp_for(const DatasetSpec& spec, Split split, std::size_t label,
                               std::size_t index) {
  Rng rng = Rng::substream(spec.seed, static_cast<std::uint64_t>(split), label, index);
  const WarpRegime& regime =
      split == Split::test && spec.ood ? spec.out_regime : spec.in_regime;
  return sample_warp(regime, rng, spec.t_min, spec.t_max);
}

inline Dataset generate(const DatasetSpec& spec) {
  spec.validate();
  const std::size_t classes = spec.classes.size();
  auto emit = [&](Split split, std::size_t per_class) {
    std::vector<LabeledSignal> out(classes * per_class,
                                   LabeledSignal{Signal(std::vector<double>{0.0, 0.0}, 0.0, 1.0), -1});
    parallel_for(out.size(), [&](std::size_t flat) {
      const std::size_t label = flat / per_class;
      const std::size_t index = flat % per_class;
      const WarpPolynomial g = warp_for(spec, split, label, index);
      out[flat] = LabeledSignal{warped_prototype(spec.classes[label], g, spec.t_min, spec.t_max, spec.n),
                                static_cast<int>(label)};
    });
    return out;
  };
  return Dataset{emit(Split::train, spec.n_train), emit(Split::test, spec.n_test)};
}

}  // namespace scdtns
