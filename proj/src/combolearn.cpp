#include "reaction_miner/combolearn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "reaction_miner/error.hpp"
#include "reaction_miner/util.hpp"

namespace reaction_miner {

bool ScoreMatrix::all_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

ScoreMatrix build_matrix(const TokenSeq& tokens, const EmotionModel& model, std::size_t n) {
  if (n == 0 || n > model.size()) {
    throw ConfigError("pattern budget " + std::to_string(n) + " outside [1, " + std::to_string(model.size()) + "]");
  }
  ScoreMatrix m(n);
  auto counts = model.match(tokens);
  if (counts.empty()) return m;
  for (auto e : kEmotions) {
    auto ranking = model.ranking(e);
    for (std::size_t j = 0; j < n; ++j) {
      auto it = counts.find(ranking[j]);
      if (it != counts.end()) m.at(e, j) = static_cast<double>(j + 1) * it->second;
    }
  }
  return m;
}

// ---- standardization ------------------------------------------------------------------

Standardizer Standardizer::fit(std::span<const TrainingExample> data) {
  Standardizer s;
  if (data.empty()) return s;
  const auto width = data[0].matrix.values().size();
  s.mean.assign(width, 0.0);
  s.scale.assign(width, 1.0);
  for (const auto& ex : data) {
    auto v = ex.matrix.values();
    for (std::size_t j = 0; j < width; ++j) s.mean[j] += v[j];
  }
  for (auto& m : s.mean) m /= static_cast<double>(data.size());
  std::vector<double> var(width, 0.0);
  for (const auto& ex : data) {
    auto v = ex.matrix.values();
    for (std::size_t j = 0; j < width; ++j) var[j] += (v[j] - s.mean[j]) * (v[j] - s.mean[j]);
  }
  for (std::size_t j = 0; j < width; ++j) {
    double sd = std::sqrt(var[j] / static_cast<double>(data.size()));
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(const ScoreMatrix& m) const {
  auto v = m.values();
  std::vector<double> out(v.begin(), v.end());
  for (std::size_t j = 0; j < out.size() && j < mean.size(); ++j) out[j] = (out[j] - mean[j]) / scale[j];
  return out;
}

// ---- learners ---------------------------------------------------------------------------

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// Weight layout.
//   CNN:      conv weights (F*K) | conv bias (F) | dense (5*F) | dense bias
//   Logistic: weights (5*n) | bias
struct Network {
  LearnerKind kind;
  std::size_t columns;
  std::size_t filters;
  std::size_t kernel;

  std::size_t size() const {
    if (kind == LearnerKind::Logistic) return kEmotionCount * columns + 1;
    return filters * kernel + filters + kEmotionCount * filters + 1;
  }

  // Returns the logit. When `grad` is given, adds dLoss/dz * dz/dweights scaled by `dz`.
  double forward(std::span<const double> w, const std::vector<double>& x, std::vector<double>* grad = nullptr,
                 double dz = 0.0) const {
    if (kind == LearnerKind::Logistic) {
      const std::size_t d = kEmotionCount * columns;
      double z = w[d];
      for (std::size_t j = 0; j < d; ++j) z += w[j] * x[j];
      if (grad) {
        for (std::size_t j = 0; j < d; ++j) (*grad)[j] += dz * x[j];
        (*grad)[d] += dz;
      }
      return z;
    }
    const std::size_t conv_b = filters * kernel;
    const std::size_t dense = conv_b + filters;
    const std::size_t dense_b = dense + kEmotionCount * filters;
    const auto half = static_cast<long>(kernel / 2);
    double z = w[dense_b];
    for (std::size_t r = 0; r < kEmotionCount; ++r) {
      const double* row = x.data() + r * columns;
      for (std::size_t f = 0; f < filters; ++f) {
        double best = -INFINITY;
        std::size_t best_t = 0;
        for (std::size_t t = 0; t < columns; ++t) {
          double acc = w[conv_b + f];
          for (std::size_t k = 0; k < kernel; ++k) {
            long src = static_cast<long>(t) + static_cast<long>(k) - half;
            if (src >= 0 && src < static_cast<long>(columns)) acc += w[f * kernel + k] * row[src];
          }
          if (acc > best) {
            best = acc;
            best_t = t;
          }
        }
        const std::size_t unit = r * filters + f;
        z += w[dense + unit] * best;
        if (grad) {
          (*grad)[dense + unit] += dz * best;
          // Max-pool routes the gradient to the winning position only.
          const double d_pool = dz * w[dense + unit];
          (*grad)[conv_b + f] += d_pool;
          for (std::size_t k = 0; k < kernel; ++k) {
            long src = static_cast<long>(best_t) + static_cast<long>(k) - half;
            if (src >= 0 && src < static_cast<long>(columns)) (*grad)[f * kernel + k] += d_pool * row[src];
          }
        }
      }
    }
    if (grad) (*grad)[dense_b] += dz;
    return z;
  }

  std::vector<double> init(std::mt19937_64& rng) const {
    std::vector<double> w(size(), 0.0);
    auto uniform = [&](double a) { return (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * a; };
    if (kind == LearnerKind::Logistic) {
      for (std::size_t j = 0; j + 1 < w.size(); ++j) w[j] = uniform(0.01);
      return w;
    }
    const std::size_t conv_b = filters * kernel;
    const std::size_t dense = conv_b + filters;
    for (std::size_t j = 0; j < conv_b; ++j) w[j] = uniform(1.0 / std::sqrt(static_cast<double>(kernel)));
    for (std::size_t j = dense; j < dense + kEmotionCount * filters; ++j) {
      w[j] = uniform(1.0 / std::sqrt(static_cast<double>(kEmotionCount * filters)));
    }
    return w;
  }
};

Network network_for(const LearnerConfig& config, std::size_t columns) {
  return {config.kind, columns, config.filters, config.kernel_width};
}

}  // namespace

TrainTrace train(std::span<const TrainingExample> data, const LearnerConfig& config, std::uint64_t seed) {
  if (data.empty()) throw TrainingError("empty training set");
  if (config.epochs == 0) throw ConfigError("epochs must be positive");
  if (config.kind == LearnerKind::Cnn && (config.filters == 0 || config.kernel_width == 0)) {
    throw ConfigError("CNN needs at least one filter and a positive kernel width");
  }
  const auto columns = data[0].matrix.columns();
  std::size_t positives = 0;
  for (const auto& ex : data) {
    if (ex.matrix.columns() != columns) throw TrainingError("score matrices differ in width");
    positives += ex.sarcastic ? 1 : 0;
  }
  if (positives == 0 || positives == data.size()) throw TrainingError("training set holds a single class");

  TrainTrace trace;
  trace.epochs = config.epochs;
  trace.parameters.kind = config.kind;
  trace.parameters.standardizer = Standardizer::fit(data);
  std::vector<std::vector<double>> inputs;
  inputs.reserve(data.size());
  for (const auto& ex : data) inputs.push_back(trace.parameters.standardizer.apply(ex.matrix));

  const double pos_weight =
      config.balance_classes ? static_cast<double>(data.size() - positives) / static_cast<double>(positives) : 1.0;
  auto example_weight = [&](std::size_t i) { return data[i].sarcastic ? pos_weight : 1.0; };
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) weight_sum += example_weight(i);

  const auto net = network_for(config, columns);
  std::mt19937_64 rng(seed);
  auto& w = trace.parameters.weights;
  w = net.init(rng);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = config.batch_size == 0 ? data.size() : config.batch_size;
  std::vector<double> grad(w.size());
  trace.correct.assign(data.size(), {});

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_weight = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const auto i = order[b];
        const double p = sigmoid(net.forward(w, inputs[i]));
        const double y = data[i].sarcastic ? 1.0 : 0.0;
        const double ew = example_weight(i);
        net.forward(w, inputs[i], &grad, ew * (p - y));
        batch_weight += ew;
      }
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= config.learning_rate * grad[j] / batch_weight;
    }
    // Observation pass with the parameters as they stand after this epoch.
    double loss = 0.0;
    std::size_t right = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double p = sigmoid(net.forward(w, inputs[i]));
      const bool truth = data[i].sarcastic;
      const bool ok = (p >= 0.5) == truth;
      trace.correct[i].push_back(ok ? 1 : 0);
      right += ok ? 1 : 0;
      const double pc = std::clamp(truth ? p : 1.0 - p, 1e-15, 1.0);
      loss -= example_weight(i) * std::log(pc);
    }
    trace.epoch_loss.push_back(loss / weight_sum);
    trace.epoch_accuracy.push_back(static_cast<double>(right) / static_cast<double>(data.size()));
  }

  trace.correct_epochs.resize(data.size());
  trace.rate.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    trace.correct_epochs[i] = static_cast<std::size_t>(std::count(trace.correct[i].begin(), trace.correct[i].end(), 1));
    trace.rate[i] = static_cast<double>(trace.correct_epochs[i]) / static_cast<double>(config.epochs);
  }
  return trace;
}

double predict_probability(const LearnedParameters& params, const LearnerConfig& config, const ScoreMatrix& m) {
  auto net = network_for(config, m.columns());
  net.kind = params.kind;
  if (params.weights.size() != net.size()) throw ContractViolation("parameters do not fit the matrix width");
  return sigmoid(net.forward(params.weights, params.standardizer.apply(m)));
}

// ---- combination histogram ------------------------------------------------------------------

bool ComboHistogram::empty_at(std::size_t threshold_index) const {
  const auto& row = counts[threshold_index];
  return std::all_of(row.begin(), row.end(), [](auto c) { return c == 0; });
}

std::string ComboHistogram::serialize() const {
  std::string out;
  for (const auto& pair : all_emotion_pairs()) {
    out += pair.name();
    for (std::size_t t = 0; t < counts.size(); ++t) out += '\t' + std::to_string(count(t, pair));
    out += '\n';
  }
  return out;
}

ComboHistogram combo_histogram(std::span<const TrainingExample> data, const TrainTrace& trace,
                               std::span<const EmotionScores> scores) {
  if (trace.correct_epochs.size() != data.size() || scores.size() != data.size() || trace.epochs == 0) {
    throw ContractViolation("combination histogram inputs are not aligned");
  }
  ComboHistogram hist;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data[i].sarcastic || scores[i].no_signal) continue;
    auto [a, b] = top2(scores[i]);
    const EmotionPair pair(a, b);
    for (std::size_t t = 0; t < kRateThresholdTenths.size(); ++t) {
      // rate >= t/10 in exact integer arithmetic
      if (trace.correct_epochs[i] * 10 >= static_cast<std::size_t>(kRateThresholdTenths[t]) * trace.epochs) {
        ++hist.counts[t][pair.canonical_index()];
      }
    }
  }
  return hist;
}

std::vector<EmotionPair> select_combos(const ComboHistogram& hist, std::size_t k) {
  if (k == 0 || k > kEmotionPairCount) throw ContractViolation("k must lie in [1, 10]");
  constexpr std::size_t loosest = kRateThresholdTenths.size() - 1;
  if (hist.empty_at(loosest)) throw TrainingError("no sarcastic example was learned reliably; histogram is empty");
  std::vector<EmotionPair> pairs(all_emotion_pairs().begin(), all_emotion_pairs().end());
  std::stable_sort(pairs.begin(), pairs.end(), [&](const EmotionPair& a, const EmotionPair& b) {
    return hist.count(loosest, a) > hist.count(loosest, b);
  });
  std::vector<EmotionPair> out;
  for (const auto& p : pairs) {
    if (out.size() == k || hist.count(loosest, p) == 0) break;
    out.push_back(p);
  }
  return out;
}

// ---- annotated comments ----------------------------------------------------------------------

std::vector<AnnotatedComment> parse_annotated(std::span<const std::string> lines) {
  std::vector<AnnotatedComment> out;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    auto f = split_n(lines[ln], '\t', 4);
    std::optional<Lang> lang;
    if (f.size() == 4) lang = parse_lang(f[1]);
    if (!lang || f[0].empty() || (f[2] != "0" && f[2] != "1")) {
      throw FormatError("annotated file: bad record at line " + std::to_string(ln + 1));
    }
    out.push_back({std::string(f[0]), *lang, f[2] == "1", std::string(f[3])});
  }
  return out;
}

std::vector<AnnotatedComment> load_annotated(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  return parse_annotated(lines);
}

std::string format_annotated(std::span<const AnnotatedComment> items) {
  std::string out;
  for (const auto& a : items) {
    out += a.id + '\t';
    out += lang_name(a.lang);
    out += a.sarcastic ? "\t1\t" : "\t0\t";
    out += a.text + '\n';
  }
  return out;
}

ComboLearning learn_combos(const EmotionModel& model, const Tokenizer& tokenizer,
                           std::span<const AnnotatedComment> annotated, std::size_t n, const LearnerConfig& config,
                           std::uint64_t seed, std::size_t k) {
  ComboLearning out;
  out.data.resize(annotated.size());
  out.scores.resize(annotated.size());
  parallel_partitions(annotated.size(), partition_count(annotated.size(), 512),
                      [&](std::size_t b, std::size_t e, std::size_t) {
                        for (std::size_t i = b; i < e; ++i) {
                          auto tokens = tokenizer(annotated[i].text, annotated[i].id);
                          out.data[i] = {build_matrix(tokens, model, n), annotated[i].sarcastic};
                          out.scores[i] = classify(tokens, model);
                        }
                      });
  out.trace = train(out.data, config, seed);
  out.histogram = combo_histogram(out.data, out.trace, out.scores);
  if (!out.histogram.empty_at(kRateThresholdTenths.size() - 1)) out.selected = select_combos(out.histogram, k);
  return out;
}

}  // namespace reaction_miner
