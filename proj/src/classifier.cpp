#include "pomdebt/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pomdebt/error.hpp"
#include "pomdebt/random.hpp"

namespace pomdebt {

namespace {

void validate(Algorithm algorithm, const Hyperparams& hp, const Dataset& data) {
  if (data.x.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training samples");
  if (data.x.size() != data.y.size()) {
    throw Error(ErrorCode::LengthMismatch, "feature and label counts differ");
  }
  const auto dim = data.x.front().dim;
  for (const auto& v : data.x) {
    if (v.dim != dim) throw Error(ErrorCode::DimensionMismatch, "training vectors differ in dimension");
  }
  for (auto y : data.y) {
    if (y >= data.label_names.size()) throw Error(ErrorCode::InvalidHyperparam, "label out of range");
  }
  const auto first = data.y.front();
  if (std::all_of(data.y.begin(), data.y.end(), [&](auto y) { return y == first; })) {
    throw Error(ErrorCode::SingleClass, "training data holds a single class");
  }
  switch (algorithm) {
    case Algorithm::NaiveBayes:
      if (!(hp.alpha > 0.0) || !std::isfinite(hp.alpha)) {
        throw Error(ErrorCode::InvalidHyperparam, "alpha must be > 0");
      }
      break;
    case Algorithm::Knn:
      if (hp.k < 1 || hp.k > data.x.size()) {
        throw Error(ErrorCode::InvalidHyperparam, "k must be in [1, |data|]");
      }
      break;
    case Algorithm::Svm:
      if (!(hp.c > 0.0) || !std::isfinite(hp.c)) throw Error(ErrorCode::InvalidHyperparam, "C must be > 0");
      if (hp.epochs < 1) throw Error(ErrorCode::InvalidHyperparam, "epochs must be >= 1");
      break;
  }
}

TrainedModel train_nb(TrainedModel m, const Dataset& data) {
  const auto classes = m.label_names.size();
  std::vector<double> docs(classes, 0.0);
  std::vector<std::vector<double>> counts(classes, std::vector<double>(m.dim, 0.0));
  std::vector<double> totals(classes, 0.0);
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const auto c = data.y[i];
    docs[c] += 1.0;
    for (const auto& [j, v] : data.x[i].entries) {
      const double tf = std::max(0.0, v);
      counts[c][j] += tf;
      totals[c] += tf;
    }
  }
  const double n = static_cast<double>(data.x.size());
  const double alpha = m.hyperparams.alpha;
  m.log_prior.resize(classes);
  m.log_likelihood.assign(classes, std::vector<double>(m.dim, 0.0));
  for (std::size_t c = 0; c < classes; ++c) {
    // A class absent from the training split keeps a -inf prior; use the
    // smallest finite value so persistence stays valid JSON.
    m.log_prior[c] = docs[c] > 0 ? std::log(docs[c] / n) : std::numeric_limits<double>::lowest();
    const double denom = totals[c] + alpha * static_cast<double>(m.dim);
    for (std::size_t j = 0; j < m.dim; ++j) {
      m.log_likelihood[c][j] = std::log((counts[c][j] + alpha) / denom);
    }
  }
  return m;
}

FeatureVector unit(const FeatureVector& v) {
  const double n = v.norm();
  if (n == 0.0) return v;
  FeatureVector out = v;
  for (auto& [i, x] : out.entries) x /= n;
  return out;
}

TrainedModel train_knn(TrainedModel m, const Dataset& data) {
  for (const auto& v : data.x) m.stored.push_back(unit(v));
  m.stored_labels = data.y;
  return m;
}

double sparse_dot(const std::vector<double>& w, const FeatureVector& x) {
  double s = 0.0;
  for (const auto& [j, v] : x.entries) s += w[j] * v;
  return s;
}

double squared_norm(const FeatureVector& x) {
  double s = 0.0;
  for (const auto& [j, v] : x.entries) s += v * v;
  return s;
}

struct BinarySvm {
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> history;
};

// Pegasos with a regularized bias; the weight vector is kept as scale * v so
// that the shrink step is O(1). The best epoch-end iterate is retained.
BinarySvm train_binary_svm(const Dataset& data, std::size_t positive, const Hyperparams& hp,
                           std::size_t dim) {
  const std::size_t n = data.x.size();
  const double lambda = 1.0 / (hp.c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);
  std::vector<double> x_norm2(n);
  for (std::size_t i = 0; i < n; ++i) x_norm2[i] = squared_norm(data.x[i]) + 1.0;

  std::vector<double> v(dim, 0.0);
  double vb = 0.0;
  double scale = 1.0;
  double v_norm2 = 0.0;

  BinarySvm best{std::vector<double>(dim, 0.0), 0.0, {}};
  double best_objective = svm_objective(best.w, best.b, lambda, data, positive);
  best.history.push_back(best_objective);

  auto materialize = [&] {
    for (auto& x : v) x *= scale;
    vb *= scale;
    v_norm2 *= scale * scale;
    scale = 1.0;
  };

  SplitMix rng(hp.seed ^ (0x9E3779B97F4A7C15ULL * (positive + 1)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    shuffle(order, rng);
    for (auto i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double y = data.y[i] == positive ? 1.0 : -1.0;
      const double margin = y * scale * (sparse_dot(v, data.x[i]) + vb);
      const double shrink = 1.0 - 1.0 / static_cast<double>(t);
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        vb = 0.0;
        v_norm2 = 0.0;
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double a = eta * y / scale;
        const double vx = sparse_dot(v, data.x[i]) + vb;
        for (const auto& [j, value] : data.x[i].entries) v[j] += a * value;
        vb += a;
        v_norm2 += 2.0 * a * vx + a * a * x_norm2[i];
      }
      const double norm = scale * std::sqrt(std::max(0.0, v_norm2));
      if (norm > radius) scale *= radius / norm;
      if (scale < 1e-9) materialize();
    }
    materialize();
    v_norm2 = std::inner_product(v.begin(), v.end(), v.begin(), vb * vb);
    const double objective = svm_objective(v, vb, lambda, data, positive);
    if (objective < best_objective) {
      best_objective = objective;
      best.w = v;
      best.b = vb;
    }
    best.history.push_back(best_objective);
  }
  return best;
}

TrainedModel train_svm(TrainedModel m, const Dataset& data) {
  const auto classes = m.label_names.size();
  m.weights.resize(classes);
  m.bias.resize(classes);
  m.loss_history.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    auto binary = train_binary_svm(data, c, m.hyperparams, m.dim);
    m.weights[c] = std::move(binary.w);
    m.bias[c] = binary.b;
    m.loss_history[c] = std::move(binary.history);
  }
  return m;
}

std::size_t argmax(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::NaiveBayes: return "nb";
    case Algorithm::Knn: return "knn";
    case Algorithm::Svm: return "svm";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::NaiveBayes, Algorithm::Knn, Algorithm::Svm}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

double svm_objective(const std::vector<double>& w, double b, double lambda, const Dataset& data,
                     std::size_t positive_class) {
  double reg = b * b;
  for (auto x : w) reg += x * x;
  double hinge = 0.0;
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const double y = data.y[i] == positive_class ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * (sparse_dot(w, data.x[i]) + b));
  }
  return 0.5 * lambda * reg + hinge / static_cast<double>(data.x.size());
}

TrainedModel train(Algorithm algorithm, const Hyperparams& hp, const Dataset& data) {
  validate(algorithm, hp, data);
  TrainedModel m;
  m.algorithm = algorithm;
  m.hyperparams = hp;
  m.label_names = data.label_names;
  m.dim = data.x.front().dim;
  switch (algorithm) {
    case Algorithm::NaiveBayes: return train_nb(std::move(m), data);
    case Algorithm::Knn: return train_knn(std::move(m), data);
    case Algorithm::Svm: return train_svm(std::move(m), data);
  }
  return m;
}

std::vector<double> nb_log_posteriors(const TrainedModel& model, const FeatureVector& v) {
  if (model.algorithm != Algorithm::NaiveBayes) {
    throw Error(ErrorCode::Precondition, "not a naive Bayes model");
  }
  if (v.dim != model.dim) throw Error(ErrorCode::DimensionMismatch, "vector dimension mismatch");
  const auto classes = model.label_names.size();
  std::vector<double> joint(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    double s = model.log_prior[c];
    for (const auto& [j, x] : v.entries) s += std::max(0.0, x) * model.log_likelihood[c][j];
    joint[c] = s;
  }
  const double peak = *std::max_element(joint.begin(), joint.end());
  double sum = 0.0;
  for (auto s : joint) sum += std::exp(s - peak);
  const double log_evidence = peak + std::log(sum);
  for (auto& s : joint) s -= log_evidence;
  return joint;
}

ModelPrediction predict(const TrainedModel& model, const FeatureVector& v) {
  if (v.dim != model.dim) throw Error(ErrorCode::DimensionMismatch, "vector dimension mismatch");
  const auto classes = model.label_names.size();
  ModelPrediction out;
  switch (model.algorithm) {
    case Algorithm::NaiveBayes: {
      auto logp = nb_log_posteriors(model, v);
      out.label = argmax(logp);
      for (auto lp : logp) out.scores.push_back(std::exp(lp));
      break;
    }
    case Algorithm::Knn: {
      const auto q = unit(v);
      std::vector<std::pair<double, std::size_t>> sims;
      sims.reserve(model.stored.size());
      for (std::size_t i = 0; i < model.stored.size(); ++i) sims.emplace_back(q.dot(model.stored[i]), i);
      const auto k = std::min(model.hyperparams.k, sims.size());
      std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(),
                        [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                        });
      std::vector<double> votes(classes, 0.0);
      for (std::size_t i = 0; i < k; ++i) votes[model.stored_labels[sims[i].second]] += 1.0;
      out.label = argmax(votes);
      for (auto& vote : votes) vote /= static_cast<double>(k);
      out.scores = std::move(votes);
      break;
    }
    case Algorithm::Svm: {
      out.scores.resize(classes);
      for (std::size_t c = 0; c < classes; ++c) out.scores[c] = sparse_dot(model.weights[c], v) + model.bias[c];
      out.label = argmax(out.scores);
      break;
    }
  }
  return out;
}

namespace {

nlohmann::json vector_to_json(const FeatureVector& v) {
  nlohmann::json idx = nlohmann::json::array();
  nlohmann::json val = nlohmann::json::array();
  for (const auto& [i, x] : v.entries) {
    idx.push_back(i);
    val.push_back(x);
  }
  return {{"i", idx}, {"v", val}};
}

FeatureVector vector_from_json(const nlohmann::json& j, std::size_t dim) {
  FeatureVector v;
  v.dim = dim;
  const auto idx = j.at("i").get<std::vector<std::size_t>>();
  const auto val = j.at("v").get<std::vector<double>>();
  if (idx.size() != val.size()) throw Error(ErrorCode::SchemaError, "sparse vector length mismatch");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= dim || (k > 0 && idx[k] <= idx[k - 1])) {
      throw Error(ErrorCode::SchemaError, "sparse vector index out of order");
    }
    v.entries.emplace_back(idx[k], val[k]);
  }
  return v;
}

}  // namespace

nlohmann::json TrainedModel::to_json() const {
  nlohmann::json params;
  switch (algorithm) {
    case Algorithm::NaiveBayes:
      params = {{"log_prior", log_prior}, {"log_likelihood", log_likelihood}};
      break;
    case Algorithm::Knn: {
      auto vectors = nlohmann::json::array();
      for (const auto& v : stored) vectors.push_back(vector_to_json(v));
      params = {{"vectors", vectors}, {"labels", stored_labels}, {"distance", "cosine"}};
      break;
    }
    case Algorithm::Svm:
      params = {{"weights", weights}, {"bias", bias}, {"loss_history", loss_history}};
      break;
  }
  return {{"version", kVersion},
          {"algorithm", std::string(to_string(algorithm))},
          {"hyperparams",
           {{"alpha", hyperparams.alpha},
            {"k", hyperparams.k},
            {"C", hyperparams.c},
            {"epochs", hyperparams.epochs},
            {"seed", hyperparams.seed}}},
          {"label_set", label_names},
          {"dim", dim},
          {"parameters", params}};
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kVersion) throw Error(ErrorCode::SchemaError, "unsupported model version");
    TrainedModel m;
    const auto algo = parse_algorithm(j.at("algorithm").get<std::string>());
    if (!algo) throw Error(ErrorCode::SchemaError, "unknown algorithm");
    m.algorithm = *algo;
    const auto& hp = j.at("hyperparams");
    m.hyperparams.alpha = hp.at("alpha").get<double>();
    m.hyperparams.k = hp.at("k").get<std::size_t>();
    m.hyperparams.c = hp.at("C").get<double>();
    m.hyperparams.epochs = hp.at("epochs").get<int>();
    m.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    m.label_names = j.at("label_set").get<std::vector<std::string>>();
    m.dim = j.at("dim").get<std::size_t>();
    const auto& p = j.at("parameters");
    const auto classes = m.label_names.size();
    auto check_rows = [&](const std::vector<std::vector<double>>& rows) {
      if (rows.size() != classes) throw Error(ErrorCode::SchemaError, "parameter rows != classes");
      for (const auto& r : rows) {
        if (r.size() != m.dim) throw Error(ErrorCode::SchemaError, "parameter width != dim");
      }
    };
    switch (m.algorithm) {
      case Algorithm::NaiveBayes:
        m.log_prior = p.at("log_prior").get<std::vector<double>>();
        m.log_likelihood = p.at("log_likelihood").get<std::vector<std::vector<double>>>();
        if (m.log_prior.size() != classes) throw Error(ErrorCode::SchemaError, "prior count != classes");
        check_rows(m.log_likelihood);
        break;
      case Algorithm::Knn:
        for (const auto& v : p.at("vectors")) m.stored.push_back(vector_from_json(v, m.dim));
        m.stored_labels = p.at("labels").get<std::vector<std::size_t>>();
        if (m.stored.size() != m.stored_labels.size()) {
          throw Error(ErrorCode::SchemaError, "stored vectors/labels mismatch");
        }
        break;
      case Algorithm::Svm:
        m.weights = p.at("weights").get<std::vector<std::vector<double>>>();
        m.bias = p.at("bias").get<std::vector<double>>();
        m.loss_history = p.value("loss_history", std::vector<std::vector<double>>{});
        check_rows(m.weights);
        if (m.bias.size() != classes) throw Error(ErrorCode::SchemaError, "bias count != classes");
        break;
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("model: ") + e.what());
  }
}

}  // namespace pomdebt
