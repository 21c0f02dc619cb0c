#include "robtrade/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "robtrade/errors.hpp"
#include "robtrade/io.hpp"
#include "robtrade/rng.hpp"

namespace robtrade {

std::string to_string(Design design) {
  return design == Design::bernoulli ? "bernoulli" : "gaussian";
}

Design parse_design(const std::string& text) {
  if (text == "bernoulli") return Design::bernoulli;
  if (text == "gaussian") return Design::gaussian;
  throw ArgumentError("unknown design '" + text + "' (expected bernoulli or gaussian)");
}

std::string to_string(NoiseLaw law) {
  return law == NoiseLaw::rademacher ? "rademacher" : "gaussian";
}

NoiseLaw parse_noise_law(const std::string& text) {
  if (text == "gaussian") return NoiseLaw::gaussian;
  if (text == "rademacher") return NoiseLaw::rademacher;
  throw ArgumentError("unknown noise law '" + text + "' (expected gaussian or rademacher)");
}

void GeneratorConfig::validate() const {
  if (n < 1) throw ArgumentError("n must be >= 1");
  if (d < 1) throw ArgumentError("d must be >= 1");
  if (s && (*s < 0 || *s > d)) throw ArgumentError("sparsity s must satisfy 0 <= s <= d");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ArgumentError("noise_std must be >= 0");
  if (!(signal_scale > 0.0) || !std::isfinite(signal_scale)) {
    throw ArgumentError("signal_scale must be > 0");
  }
}

namespace {

Matrix draw_design(const GeneratorConfig& cfg, SeededStream& rng) {
  if (cfg.design == Design::gaussian) return rng.normal_matrix(cfg.n, cfg.d);
  Matrix X(cfg.n, cfg.d);
  for (Index i = 0; i < cfg.n; ++i) {
    for (Index j = 0; j < cfg.d; ++j) X(i, j) = rng.sign();
  }
  return X;
}

// Support by partial Fisher-Yates (sorted), then one sign per support entry.
std::pair<Vector, std::vector<Index>> draw_truth(const GeneratorConfig& cfg, SeededStream& rng) {
  const Index s = cfg.s.value_or(cfg.d);
  std::vector<Index> idx(static_cast<std::size_t>(cfg.d));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index k = 0; k < s; ++k) {
    const auto j = static_cast<std::size_t>(k) +
                   static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(cfg.d - k)));
    std::swap(idx[static_cast<std::size_t>(k)], idx[j]);
  }
  std::vector<Index> support(idx.begin(), idx.begin() + s);
  std::sort(support.begin(), support.end());
  Vector theta = Vector::Zero(cfg.d);
  for (Index j : support) theta(j) = rng.sign() * cfg.signal_scale;
  return {theta, support};
}

void add_noise(Vector& Y, const GeneratorConfig& cfg, SeededStream& rng) {
  if (cfg.noise_std == 0.0) return;
  for (Index i = 0; i < Y.size(); ++i) {
    Y(i) += cfg.noise_std * (cfg.noise_law == NoiseLaw::rademacher ? rng.sign() : rng.normal());
  }
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_cell(std::string cell, std::size_t line) {
  const auto b = cell.find_first_not_of(" \t");
  const auto e = cell.find_last_not_of(" \t");
  if (b == std::string::npos) throw ParseError("empty cell", line);
  cell = cell.substr(b, e - b + 1);
  const char* first = cell.data();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ParseError("non-numeric cell '" + cell + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite cell '" + cell + "'", line);
  return v;
}

}  // namespace

LinRegProblem generate_problem(const GeneratorConfig& config) {
  config.validate();
  SeededStream rng(config.seed);
  LinRegProblem p;
  p.X = draw_design(config, rng);
  auto [theta, support] = draw_truth(config, rng);
  p.Y = p.X * theta;
  add_noise(p.Y, config, rng);
  p.theta_star = std::move(theta);
  p.support = std::move(support);
  p.realizable = config.noise_std == 0.0;
  return p;
}

LabeledDataset generate_dataset(const GeneratorConfig& config, const TeacherSpec& teacher) {
  config.validate();
  SeededStream rng(config.seed);
  Matrix X = draw_design(config, rng);
  const double m = static_cast<double>(config.d);
  Vector Y(config.n);
  switch (teacher.kind) {
    case TeacherSpec::Kind::linear: {
      const auto truth = draw_truth(config, rng);
      Y = X * truth.first;
      add_noise(Y, config, rng);
      break;
    }
    case TeacherSpec::Kind::quadnet: {
      if (teacher.a.empty()) throw ArgumentError("quadnet teacher needs output weights");
      const Index k = static_cast<Index>(teacher.a.size());
      const Matrix W = rng.normal_matrix(k, config.d) * (config.signal_scale / std::sqrt(m));
      for (Index i = 0; i < config.n; ++i) {
        const Vector z = W * X.row(i).transpose();
        double f = 0.0;
        for (Index j = 0; j < k; ++j) f += teacher.a[static_cast<std::size_t>(j)] * z(j) * z(j);
        Y(i) = f;
      }
      add_noise(Y, config, rng);
      break;
    }
    case TeacherSpec::Kind::logistic: {
      const Vector w = rng.normal_vector(config.d) * (config.signal_scale / std::sqrt(m));
      for (Index i = 0; i < config.n; ++i) {
        const double s = X.row(i).dot(w);
        Y(i) = rng.uniform() < 1.0 / (1.0 + std::exp(-s)) ? 1.0 : 0.0;
      }
      break;
    }
  }
  return LabeledDataset(std::move(X), std::move(Y));
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, double train_fraction,
                                                std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ArgumentError("train_fraction must lie strictly inside (0, 1)");
  }
  const Index n = data.size();
  const auto k = static_cast<Index>(std::llround(train_fraction * static_cast<double>(n)));
  if (k < 1 || k >= n) throw ArgumentError("split leaves one part empty");

  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  SeededStream rng(seed);
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }
  const auto take = [&](Index from, Index to, DatasetRole role) {
    Matrix X(to - from, data.input_dim());
    Vector Y(to - from);
    for (Index r = from; r < to; ++r) {
      X.row(r - from) = data.X().row(perm[static_cast<std::size_t>(r)]);
      Y(r - from) = data.Y()(perm[static_cast<std::size_t>(r)]);
    }
    return LabeledDataset(std::move(X), std::move(Y), role);
  };
  return {take(0, k, DatasetRole::train), take(k, n, DatasetRole::eval)};
}

LabeledDataset parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  std::size_t blank_at = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (blank_at == 0) blank_at = lineno;
      continue;
    }
    if (blank_at != 0) throw ParseError("blank line inside data", blank_at);
    const auto fields = split_fields(line);
    if (rows.empty()) {
      if (fields.size() < 2) throw ParseError("need at least one input column and a target", lineno);
      width = fields.size();
    } else if (fields.size() != width) {
      std::ostringstream msg;
      msg << "expected " << width << " columns, found " << fields.size();
      throw ParseError(msg.str(), lineno);
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_cell(f, lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows", 1);

  const auto n = static_cast<Index>(rows.size());
  const auto m = static_cast<Index>(width - 1);
  Matrix X(n, m);
  Vector Y(n);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (Index j = 0; j < m; ++j) X(i, j) = row[static_cast<std::size_t>(j)];
    Y(i) = row.back();
  }
  return LabeledDataset(std::move(X), std::move(Y));
}

LabeledDataset load_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

std::string to_csv(const Matrix& X, const Vector& Y) {
  if (X.rows() != Y.size()) throw DimensionError("X and Y row counts differ");
  std::string out;
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      out += format_double(X(i, j));
      out += ',';
    }
    out += format_double(Y(i));
    out += '\n';
  }
  return out;
}

}  // namespace robtrade
