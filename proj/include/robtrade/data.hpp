#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robtrade/dataset.hpp"
#include "robtrade/linreg_adv.hpp"

namespace robtrade {

enum class Design { bernoulli, gaussian };

std::string to_string(Design design);
Design parse_design(const std::string& text);

/// Target noise: N(0, noise_std^2), or +-noise_std with equal probability.
enum class NoiseLaw { gaussian, rademacher };

std::string to_string(NoiseLaw law);
NoiseLaw parse_noise_law(const std::string& text);

/// Synthetic design and ground truth. The seed fully determines the output.
struct GeneratorConfig {
  Index n = 0;
  Index d = 0;
  std::optional<Index> s;  // sparsity; dense when unset
  Design design = Design::gaussian;
  double noise_std = 0.0;
  NoiseLaw noise_law = NoiseLaw::gaussian;
  std::uint64_t seed = 0;
  double signal_scale = 1.0;

  void validate() const;
};

/// X by the design law (row-major draw order), theta* with s entries at
/// +-signal_scale on a uniformly drawn support, Y = X theta* + noise.
LinRegProblem generate_problem(const GeneratorConfig& config);

/// Teacher producing the targets of a general dataset.
struct TeacherSpec {
  enum class Kind { linear, quadnet, logistic };
  Kind kind = Kind::linear;
  /// Output weights of the quadratic network teacher.
  std::vector<double> a = {1.0, 0.5};
};

/// Inputs from the design law with m = config.d columns, drawn first; then
/// the teacher: linear (theta* as in generate_problem, Y = X theta* + noise),
/// quadnet (W* ~ N(0, scale^2 / m) row-major, Y = f(x, W*) + noise), or
/// logistic (w* ~ N(0, scale^2 / m), labels 1 when uniform() < sigmoid(x^T w*)).
LabeledDataset generate_dataset(const GeneratorConfig& config, const TeacherSpec& teacher);

/// Seeded permutation split; the train part gets round(fraction * n) rows.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, double train_fraction,
                                                std::uint64_t seed);

/// Comma-separated numeric table without header; the last column is the target.
LabeledDataset load_csv(const std::filesystem::path& path);
LabeledDataset parse_csv(const std::string& text);

/// Rows "x_1,...,x_m,y" with shortest round-trip number formatting.
std::string to_csv(const Matrix& X, const Vector& Y);

}  // namespace robtrade
