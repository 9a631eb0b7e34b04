#pragma once

#include <cmath>
#include <future>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tm2/agent.hpp"
#include "tm2/errors.hpp"
#include "tm2/interaction.hpp"
#include "tm2/payloads.hpp"

namespace tm2::agents {

// Trainable sense classifier over hashed feature vectors. One independent
// model per lemma; write-once (train) then read-only (classify). Built-in
// algorithms: multinomial naive Bayes with add-one smoothing, and
// nearest-centroid (Euclidean). Ties break to the lexicographically
// smallest class label.
class ClassifierModel {
 public:
  explicit ClassifierModel(std::string algorithm = "naive-bayes")
      : algorithm_(std::move(algorithm)) {
    if (algorithm_ != "naive-bayes" && algorithm_ != "nearest-centroid")
      throw InvalidConfig("unknown classifier algorithm: " + algorithm_);
  }

  const std::string& algorithm() const { return algorithm_; }
  bool trained() const { return trained_; }

  void train(const std::vector<std::pair<FeatureVector, std::string>>& pairs) {
    std::map<std::string, std::vector<std::pair<FeatureVector, std::string>>>
        by_lemma;
    for (const auto& p : pairs) by_lemma[p.first.lemma].push_back(p);

    // Lemmas are independent; train them concurrently.
    std::vector<std::pair<std::string, std::future<PerLemma>>> futures;
    for (auto& [lemma, list] : by_lemma)
      futures.emplace_back(lemma,
                           std::async(std::launch::async,
                                      [this, &list] { return fit(list); }));
    for (auto& [lemma, f] : futures) lemmas_[lemma] = f.get();
    trained_ = true;
  }

  Sense classify(const FeatureVector& v) const {
    if (lemmas_.empty())  // trained on nothing
      return Sense{kUnknownSense, v.lemma, v.instance_id};
    auto it = lemmas_.find(v.lemma);
    if (it == lemmas_.end())
      throw UnknownLemma("no model trained for lemma: " + v.lemma);
    return Sense{predict(it->second, v), v.lemma, v.instance_id};
  }

 private:
  struct PerClass {
    std::vector<double> counts;  // summed feature counts
    double mass = 0;             // total of counts
    size_t instances = 0;
  };
  struct PerLemma {
    std::map<std::string, PerClass> classes;  // sorted by label
    size_t total_instances = 0;
    size_t dim = 0;
  };

  PerLemma fit(
      const std::vector<std::pair<FeatureVector, std::string>>& pairs) const {
    PerLemma model;
    for (const auto& [v, label] : pairs) {
      model.dim = std::max(model.dim, v.dim());
      auto& cls = model.classes[label];
      if (cls.counts.size() < v.dim()) cls.counts.resize(v.dim(), 0.0);
      for (size_t i = 0; i < v.values.size(); ++i) {
        cls.counts[i] += v.values[i];
        cls.mass += v.values[i];
      }
      ++cls.instances;
      ++model.total_instances;
    }
    return model;
  }

  std::string predict(const PerLemma& model, const FeatureVector& v) const {
    std::string best;
    double best_score = 0;
    bool first = true;
    for (const auto& [label, cls] : model.classes) {
      double score = algorithm_ == "naive-bayes" ? nb_score(model, cls, v)
                                                 : -centroid_distance(cls, v);
      if (first || score > best_score) {
        best = label;
        best_score = score;
        first = false;
      }
    }
    return best;
  }

  static double nb_score(const PerLemma& model, const PerClass& cls,
                         const FeatureVector& v) {
    double score = std::log(static_cast<double>(cls.instances) /
                            static_cast<double>(model.total_instances));
    double denominator = cls.mass + static_cast<double>(model.dim);
    for (size_t i = 0; i < v.values.size(); ++i) {
      if (v.values[i] == 0) continue;
      double count = i < cls.counts.size() ? cls.counts[i] : 0.0;
      score += v.values[i] * std::log((count + 1.0) / denominator);
    }
    return score;
  }

  static double centroid_distance(const PerClass& cls,
                                  const FeatureVector& v) {
    double dist = 0;
    size_t dim = std::max(cls.counts.size(), v.values.size());
    for (size_t i = 0; i < dim; ++i) {
      double c = i < cls.counts.size()
                     ? cls.counts[i] / static_cast<double>(cls.instances)
                     : 0.0;
      double x = i < v.values.size() ? v.values[i] : 0.0;
      dist += (c - x) * (c - x);
    }
    return dist;
  }

  std::string algorithm_;
  bool trained_ = false;
  std::map<std::string, PerLemma> lemmas_;
};

// Pairs feature and sense annotations by (lemma, instance_id); both sides
// must match up completely.
inline std::vector<std::pair<FeatureVector, std::string>> align_training_pairs(
    const std::vector<Annotation>& features,
    const std::vector<Annotation>& senses) {
  std::map<std::pair<std::string, std::string>, std::string> labels;
  for (const auto& a : senses) {
    const Sense& s = a.value.get<Sense>();
    labels[{s.lemma, s.instance_id}] = s.label;
  }
  std::vector<std::pair<FeatureVector, std::string>> pairs;
  size_t used = 0;
  for (const auto& a : features) {
    const FeatureVector& v = a.value.get<FeatureVector>();
    auto it = labels.find({v.lemma, v.instance_id});
    if (it == labels.end())
      throw AlignmentError("feature instance (" + v.lemma + ", " +
                           v.instance_id + ") has no sense annotation");
    pairs.emplace_back(v, it->second);
    ++used;
  }
  if (used < labels.size())
    throw AlignmentError("sense annotations without feature instances: " +
                         std::to_string(labels.size() - used) + " unmatched");
  return pairs;
}

// The classifier as both an agent (FeatureVector -> Sense analysis target)
// and a model target for a training synthesis, sharing one write-once state.
class ClassifierAgent {
 public:
  explicit ClassifierAgent(AgentId id, std::string algorithm = "naive-bayes")
      : id_(std::move(id)),
        model_(std::make_shared<ClassifierModel>(std::move(algorithm))) {}

  const AgentId& id() const { return id_; }
  const ClassifierModel& model() const { return *model_; }

  AgentSpec agent_spec() const {
    AgentSpec spec;
    spec.id = id_;
    spec.input_type = "FeatureVector";
    spec.output_type = "Sense";
    auto model = model_;
    auto id = id_;
    spec.process = [model, id](const std::vector<Annotation>& input) {
      std::vector<Annotation> out;
      for (const auto& a : input) {
        Sense s = model->classify(a.value.get<FeatureVector>());
        out.push_back(Annotation{Value::of(std::move(s)), a.start, a.end,
                                 a.data_ref, id});
      }
      return out;
    };
    return spec;
  }

  ModelSpec model_spec() const {
    ModelSpec spec;
    spec.id = id_;
    spec.data_type = "FeatureVector";
    spec.info_type = "Sense";
    auto model = model_;
    auto id = id_;
    spec.train = [model, id](const std::vector<Annotation>& data,
                             const std::vector<Annotation>& info) {
      model->train(align_training_pairs(data, info));
      TrainedModel trained;
      trained.id = id;
      trained.data_type = "FeatureVector";
      trained.info_type = "Sense";
      trained.description = id + " using " + model->algorithm();
      trained.classify = [model](const Value& v) {
        return Value::of(model->classify(v.get<FeatureVector>()));
      };
      return trained;
    };
    return spec;
  }

 private:
  AgentId id_;
  std::shared_ptr<ClassifierModel> model_;
};

}  // namespace tm2::agents
