/* Copyright 2026 The maxent-ig Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
// maxent: seeded experiment runner.
//
//   maxent <subcommand> [--config FILE] [--set key.path=value ...] [flags]
//
// Configuration is resolved in three layers: built-in defaults (which depend
// on the dataset kind), the JSON config file, then command-line flags. The
// resolved config is written to <out>/config.json; passing it back with
// --config reproduces every CSV byte for byte.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxent/maxent.hpp"

namespace {

using nlohmann::json;
using namespace maxent;

constexpr std::uint64_t kDefaultSeed = 0;
constexpr const char* kOutEnv = "MAXENT_OUT";

enum ExitCode { kOk = 0, kOther = 1, kConfigError = 2, kDataError = 3, kNumericError = 4 };

// ---------------------------------------------------------------------------
// Config resolution.

json defaults_for(const std::string& dataset_kind) {
  json d;
  d["seed"] = kDefaultSeed;
  d["jobs"] = 1;
  const char* env = std::getenv(kOutEnv);
  d["out"] = env && *env ? env : "maxent_out";
  d["methods"] = {"random",    "vanilla",    "grad_x_input", "guided",
                  "guided_sg", "smoothgrad", "ig"};
  d["baselines"] = {"zero", "black", "white", "avg",     "xentr_u", "xdist",
                    "train_avg", "blur", "uniform", "gaussian", "xentr"};
  d["ig_steps"] = 100;
  d["smoothgrad"] = {{"samples", 50}, {"noise", 0.15}};
  d["evaluate"] = {{"evaluator", "entropy"}, {"fraction", nullptr}, {"instances", 500},
                   {"classic_substitute", "zero"}};
  d["baseline"] = {{"instance", 0}};
  d["explain"] = {{"instance", 0}, {"methods", {"vanilla", "ig_zero", "ig_xentr"}}};
  d["invariance"] = {{"amplitude", 0.5}, {"instances", 20}};
  d["nonconservation"] = {{"steps", 1000}, {"class", nullptr}, {"learning_rate", nullptr}};
  if (dataset_kind == "toy") {
    d["dataset"] = {{"kind", "toy"}, {"features", 3}, {"relevant", 2}, {"classes", 3},
                    {"domain", 2}, {"count", 10000}};
    d["model"] = {{"kind", "mlp"}, {"hidden", {32}}, {"path", nullptr}};
    d["train"] = {{"epochs", 60}, {"batch_size", 32}, {"learning_rate", 0.01},
                  {"optimizer", "adam"}, {"weight_decay", 1e-3}};
    d["sweep"] = {{"grid", 200}, {"reference", "mask"}, {"instances", 0}, {"bins", 50}};
  } else {
    d["dataset"] = {{"kind", dataset_kind}, {"count", 6000}, {"side", 14},
                    {"images", nullptr}, {"labels", nullptr},
                    {"normalize", {-0.42, 2.82}}};
    d["model"] = {{"kind", "mlp"}, {"hidden", {64}}, {"path", nullptr}};
    d["train"] = {{"epochs", 8}, {"batch_size", 32}, {"learning_rate", 1e-3},
                  {"optimizer", "adam"}, {"weight_decay", 0.0}};
    d["sweep"] = {{"grid", 101}, {"reference", "hybrid"}, {"instances", 50}, {"bins", 50},
                  {"hybrid_sample", 50}};
  }
  return d;
}

// "a.b.c=value"; value is parsed as JSON and falls back to a plain string.
void apply_set(json& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SpecError("--set expects key.path=value, got '" + assignment + "'");
  }
  std::string key = assignment.substr(0, eq), raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &cfg;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    std::string part = key.substr(start, dot - start);
    if (part.empty()) throw SpecError("--set: empty key segment in '" + key + "'");
    if (!node->is_object()) *node = json::object();
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    std::string item = s.substr(start, comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Flags {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out;
  std::optional<std::string> dataset;
  std::optional<std::string> model;
  std::optional<std::string> methods;
  std::optional<std::string> baselines;
};

json resolve_config(const Flags& f) {
  json user = json::object();
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) throw DataError("cannot open config " + f.config_path);
    user = json::parse(is);
    if (!user.is_object()) throw SpecError("config root must be an object");
  }
  json flags = json::object();
  if (f.seed) flags["seed"] = *f.seed;
  if (f.jobs) flags["jobs"] = *f.jobs;
  if (f.out) flags["out"] = *f.out;
  if (f.dataset) flags["dataset"]["kind"] = *f.dataset;
  if (f.model) flags["model"]["path"] = *f.model;
  if (f.methods) flags["methods"] = split_list(*f.methods);
  if (f.baselines) flags["baselines"] = split_list(*f.baselines);
  for (const auto& s : f.sets) apply_set(flags, s);
  user.merge_patch(flags);

  std::string kind = "glyph";
  if (user.contains("dataset") && user["dataset"].contains("kind")) {
    kind = user["dataset"]["kind"].get<std::string>();
  }
  if (kind != "toy" && kind != "glyph" && kind != "idx") {
    throw SpecError("dataset.kind must be toy, glyph or idx, got '" + kind + "'");
  }
  json cfg = defaults_for(kind);
  cfg.merge_patch(user);
  return cfg;
}

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("config is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SpecError(std::string("config field '") + key + "': " + e.what());
  }
}

// Merge patches drop null members, so an archived config may omit them.
bool unset(const json& j, const char* key) { return !j.contains(key) || j.at(key).is_null(); }

const json& section(const json& j, const char* key) {
  if (unset(j, key)) throw SpecError(std::string("config is missing '") + key + "'");
  return j.at(key);
}

// ---------------------------------------------------------------------------
// Dataset and model.

struct Workspace {
  json cfg;
  std::filesystem::path out;
  std::uint64_t seed = kDefaultSeed;
  std::size_t jobs = 1;
  LabeledDataset data;
  std::optional<GroundTruthMask> mask;  // toy only
  std::optional<ToySpec> toy;
  Network net;
};

void load_dataset(Workspace& w) {
  const json& d = section(w.cfg, "dataset");
  const std::string kind = get<std::string>(d, "kind");
  if (kind == "toy") {
    ToySpec s;
    s.features = get<std::size_t>(d, "features");
    s.relevant = get<std::size_t>(d, "relevant");
    s.classes = get<std::size_t>(d, "classes");
    s.domain = get<std::size_t>(d, "domain");
    s.count = get<std::size_t>(d, "count");
    s.seed = w.seed;
    auto [ds, mask] = toy_generate(s);
    w.data = std::move(ds);
    w.mask = std::move(mask);
    w.toy = s;
    return;
  }
  if (kind == "glyph") {
    GlyphSpec g;
    g.count = get<std::size_t>(d, "count");
    g.side = get<std::size_t>(d, "side");
    g.seed = w.seed;
    w.data = glyph_generate(g);
  } else {
    if (unset(d, "images") || unset(d, "labels")) {
      throw SpecError("idx dataset needs dataset.images and dataset.labels paths");
    }
    w.data = load_idx_dataset(get<std::string>(d, "images"), get<std::string>(d, "labels"));
  }
  auto r = get<std::vector<double>>(d, "normalize");
  if (r.size() != 2 || !(r[1] > r[0])) throw SpecError("dataset.normalize must be [lo, hi]");
  w.data = normalize(std::move(w.data), {r[0], r[1]});
}

Network fresh_model(const Workspace& w) {
  const json& m = section(w.cfg, "model");
  const std::string kind = get<std::string>(m, "kind");
  const Shape& shape = w.data.sample_shape;
  if (kind == "mlp") {
    return make_mlp(shape, get<std::vector<std::size_t>>(m, "hidden"), w.data.class_count,
                    w.seed + 1);
  }
  if (kind == "cnn") return make_cnn(shape, w.data.class_count, CnnShape{}, w.seed + 2);
  throw SpecError("model.kind must be mlp or cnn, got '" + kind + "'");
}

TrainConfig train_config(const Workspace& w) {
  const json& t = section(w.cfg, "train");
  TrainConfig c;
  c.epochs = get<std::size_t>(t, "epochs");
  c.batch_size = get<std::size_t>(t, "batch_size");
  c.learning_rate = get<double>(t, "learning_rate");
  c.weight_decay = get<double>(t, "weight_decay");
  c.seed = w.seed;
  const std::string opt = get<std::string>(t, "optimizer");
  if (opt == "adam") {
    c.optimizer = Optimizer::kAdam;
  } else if (opt == "sgd") {
    c.optimizer = Optimizer::kSgd;
  } else {
    throw SpecError("train.optimizer must be adam or sgd");
  }
  return c;
}

// Loads model.path when given; otherwise trains from the config.
void obtain_model(Workspace& w) {
  const json& m = section(w.cfg, "model");
  if (!unset(m, "path")) {
    w.net = load_model(std::filesystem::path(get<std::string>(m, "path")));
    if (w.net.input_shape() != w.data.sample_shape) {
      throw DataError("model input shape " + shape_string(w.net.input_shape()) +
                      " does not match dataset " + shape_string(w.data.sample_shape));
    }
    return;
  }
  TrainReport r = train(fresh_model(w), w.data, train_config(w));
  w.net = std::move(r.network);
}

Workspace open_workspace(const json& cfg, bool need_model) {
  Workspace w;
  w.cfg = cfg;
  w.seed = get<std::uint64_t>(cfg, "seed");
  w.jobs = std::max<std::size_t>(1, get<std::size_t>(cfg, "jobs"));
  w.out = get<std::string>(cfg, "out");
  std::filesystem::create_directories(w.out);
  load_dataset(w);
  if (need_model) obtain_model(w);
  return w;
}

void write_config(const Workspace& w) { write_json(w.out / "config.json", w.cfg); }

std::vector<Tensor> test_instances(const Workspace& w, std::size_t n) {
  std::vector<Tensor> xs;
  for (std::size_t i : w.data.test_indices) {
    if (n != 0 && xs.size() == n) break;
    xs.push_back(w.data.instances[i]);
  }
  return xs;
}

const Tensor& test_instance(const Workspace& w, std::size_t k) {
  if (k >= w.data.test_indices.size()) {
    throw SpecError("instance index " + std::to_string(k) + " exceeds the test split (" +
                    std::to_string(w.data.test_indices.size()) + ")");
  }
  return w.data.instances[w.data.test_indices[k]];
}

std::vector<MethodSpec> parse_methods(const json& list) {
  std::vector<MethodSpec> out;
  for (const auto& m : list) {
    std::string name = m.get<std::string>();
    // Bare "ig" stands for integrated gradients over the configured baselines.
    out.push_back(name == "ig" ? MethodSpec{Method::kIntegratedGradients} : parse_method(name));
  }
  return out;
}

std::vector<BaselineKind> parse_baselines(const json& list) {
  std::vector<BaselineKind> out;
  for (const auto& b : list) out.push_back(parse_baseline(b.get<std::string>()));
  return out;
}

ExplainOptions explain_options(const json& cfg) {
  ExplainOptions o;
  o.ig_steps = get<std::size_t>(cfg, "ig_steps");
  o.smoothgrad.samples = get<std::size_t>(section(cfg, "smoothgrad"), "samples");
  o.smoothgrad.noise = get<double>(section(cfg, "smoothgrad"), "noise");
  return o;
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_train(const json& cfg) {
  Workspace w = open_workspace(cfg, false);
  TrainReport r = train(fresh_model(w), w.data, train_config(w));
  save_model(w.out / "model.txt", r.network);
  std::vector<double> epochs(r.epoch_loss.size());
  std::iota(epochs.begin(), epochs.end(), 1.0);
  write_two_column_csv(w.out / "epoch_loss.csv", "epoch", "loss", epochs, r.epoch_loss);
  write_json(w.out / "train_report.json", {{"train_accuracy", r.train_accuracy},
                                           {"test_accuracy", r.test_accuracy},
                                           {"epochs", r.epoch_loss.size()}});
  write_config(w);
  std::printf("train accuracy %.4f  test accuracy %.4f\n", r.train_accuracy, r.test_accuracy);
  return kOk;
}

int cmd_baseline(const json& cfg) {
  Workspace w = open_workspace(cfg, true);
  BaselineBuilder builder(w.net, w.data.value_range, &w.data);
  builder.prepare();
  const Tensor& x = test_instance(w, get<std::size_t>(section(cfg, "baseline"), "instance"));
  auto os = open_output(w.out / "baselines.csv");
  os << "baseline,entropy,status\n";
  const double bound = std::log(static_cast<double>(w.net.class_count()));
  for (BaselineKind k : parse_baselines(section(cfg, "baselines"))) {
    const std::string name(baseline_name(k));
    try {
      BaselineSpec b = builder.build(k, x, w.seed);
      export_baseline(w.out / "baselines" / name, b);
      os << name << ',' << fmt_double(logits_entropy(w.net, b.materialized)) << ",ok\n";
    } catch (const UnsupportedError& e) {
      os << name << ",,unsupported\n";
    }
  }
  os << "ln_classes," << fmt_double(bound) << ",bound\n";
  write_raw_f64(w.out / "instance.f64", x);
  write_config(w);
  std::printf("xentr entropy %.6f of %.6f\n", builder.max_entropy_full_result().entropy,
              bound);
  return kOk;
}

int cmd_sweep(const json& cfg) {
  Workspace w = open_workspace(cfg, true);
  const json& s = section(cfg, "sweep");
  const std::size_t n = get<std::size_t>(s, "grid");
  const ValueRange range = w.data.value_range;
  EntropyCurve ec = entropy_curve(w.net, range, n);
  write_two_column_csv(w.out / "entropy_curve.csv", "baseline", "entropy", ec.inputs,
                       ec.entropies);
  const std::string reference = get<std::string>(s, "reference");
  json markers;
  markers["entropy_argmax"] = ec.inputs[ec.argmax()];
  if (reference == "mask") {
    if (!w.mask) throw SpecError("sweep.reference=mask needs the toy dataset");
    std::vector<Tensor> xs = toy_all_instances(*w.toy);
    const std::size_t limit = get<std::size_t>(s, "instances");
    if (limit != 0 && limit < xs.size()) xs.resize(limit);
    SweepCurve c = mean_baseline_sweep(w.net, xs, *w.mask, range, n,
                                       get<std::size_t>(cfg, "ig_steps"), w.jobs);
    write_two_column_csv(w.out / "loss_curve.csv", "baseline", "kl_loss", c.inputs, c.losses);
    markers["loss_argmin"] = c.argmin_value();
    markers["gap"] = std::abs(c.argmin_value() - ec.inputs[ec.argmax()]);
  } else if (reference == "hybrid") {
    BaselineBuilder builder(w.net, range, &w.data);
    builder.prepare();
    Explainer ex(w.net, builder, explain_options(cfg));
    std::vector<MethodSpec> methods;
    for (const MethodSpec& m : parse_methods(section(cfg, "methods"))) {
      if (m.method != Method::kRandom) methods.push_back(m);
    }
    methods = expand_cells(methods, parse_baselines(section(cfg, "baselines")));
    std::vector<Tensor> xs = test_instances(w, get<std::size_t>(s, "instances"));
    HybridWeightResult hw = compute_hybrid_weights(
        ex, xs, methods, get<std::size_t>(s, "hybrid_sample"), w.seed, w.jobs);
    {
      auto os = open_output(w.out / "hybrid_weights.csv");
      os << "method,mean_score,weight\n";
      for (std::size_t i = 0; i < methods.size(); ++i) {
        os << methods[i].tag() << ',' << fmt_double(hw.mean_scores[i]) << ','
           << fmt_double(hw.weights.weights[i]) << '\n';
      }
    }
    const std::uint64_t seed = w.seed;
    auto ref = [&](const Tensor& x, std::size_t cls) -> SweepReference {
      return hybrid_explain(ex, x, cls, methods, hw.weights, seed);
    };
    MinLossHistogram h = min_loss_histogram(w.net, xs, ref, range, n,
                                            get<std::size_t>(s, "bins"),
                                            get<std::size_t>(cfg, "ig_steps"), w.jobs);
    auto os = open_output(w.out / "histogram.csv");
    os << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      os << fmt_double(h.edges[b]) << ',' << fmt_double(h.edges[b + 1]) << ',' << h.counts[b]
         << '\n';
    }
    std::vector<double> idx(h.argmins.size());
    std::iota(idx.begin(), idx.end(), 0.0);
    write_two_column_csv(w.out / "argmins.csv", "instance", "argmin", idx, h.argmins);
    markers["mode_center"] = h.mode_center;
    markers["gap"] = std::abs(h.mode_center - h.entropy_argmax);
  } else {
    throw SpecError("sweep.reference must be mask or hybrid");
  }
  write_json(w.out / "markers.json", markers);
  write_config(w);
  std::printf("%s\n", markers.dump().c_str());
  return kOk;
}

int cmd_invariance(const json& cfg) {
  Workspace w = open_workspace(cfg, true);
  const json& c = section(cfg, "invariance");
  const double amp = get<double>(c, "amplitude");
  std::vector<Tensor> xs = test_instances(w, get<std::size_t>(c, "instances"));
  if (xs.empty()) throw DataError("invariance needs at least one test instance");
  Tensor zero(w.net.input_shape(), 0.0);
  auto os = open_output(w.out / "invariance.csv");
  os << "shift,policy,max_attribution_diff,max_logit_diff,invariant\n";
  for (ShiftShape shape : {ShiftShape::kUniform, ShiftShape::kCross}) {
    for (BaselinePolicy p : {BaselinePolicy::kHold, BaselinePolicy::kShiftWithInput,
                             BaselinePolicy::kShiftByMask}) {
      try {
        InvarianceReport r = linear_transform_test(w.net, xs, {shape, amp}, p, zero,
                                                   get<std::size_t>(cfg, "ig_steps"));
        os << shift_name(shape) << ',' << policy_name(p) << ','
           << fmt_double(r.max_attribution_diff) << ',' << fmt_double(r.max_logit_diff) << ','
           << (r.invariant() ? "pass" : "fail") << '\n';
      } catch (const UnsupportedError&) {
        os << shift_name(shape) << ',' << policy_name(p) << ",,,unsupported\n";
      }
    }
  }
  write_config(w);
  return kOk;
}

int cmd_evaluate(const json& cfg) {
  Workspace w = open_workspace(cfg, true);
  const json& e = section(cfg, "evaluate");
  BaselineBuilder builder(w.net, w.data.value_range, &w.data);
  builder.prepare();
  Explainer ex(w.net, builder, explain_options(cfg));
  MatrixOptions opt;
  opt.evaluator = parse_evaluator(get<std::string>(e, "evaluator"));
  if (!unset(e, "fraction")) opt.fraction = get<double>(e, "fraction");
  const std::string sub = get<std::string>(e, "classic_substitute");
  if (sub == "zero") {
    opt.classic_substitute = SubstituteKind::kZero;
  } else if (sub == "instance_min") {
    opt.classic_substitute = SubstituteKind::kInstanceMin;
  } else if (sub == "sign_flip") {
    opt.classic_substitute = SubstituteKind::kSignFlip;
  } else if (sub == "blur") {
    opt.classic_substitute = SubstituteKind::kBlur;
  } else {
    throw SpecError("evaluate.classic_substitute must be zero, instance_min, sign_flip or blur");
  }
  opt.seed = w.seed;
  opt.jobs = w.jobs;
  auto cells = expand_cells(parse_methods(section(cfg, "methods")),
                            parse_baselines(section(cfg, "baselines")));
  std::vector<Tensor> xs = test_instances(w, get<std::size_t>(e, "instances"));
  auto reports = run_matrix(ex, xs, cells, opt);
  for (const AblationReport& r : reports) {
    write_cell_csv(w.out / "cells" / (cell_name(r) + ".csv"), r);
    if (r.failures) std::fprintf(stderr, "cell %s failed: %s\n", cell_name(r).c_str(),
                                 r.error.c_str());
  }
  write_summary_csv(w.out / "summary.csv", reports);
  write_config(w);
  for (const AblationReport& r : reports) {
    std::printf("%-16s median %.6f mean %.6f\n", cell_name(r).c_str(), r.median, r.mean);
  }
  return kOk;
}

int cmd_nonconservation(const json& cfg) {
  Workspace w = open_workspace(cfg, true);
  const json& c = section(cfg, "nonconservation");
  const ValueRange range = w.data.value_range;
  BaselineBuilder builder(w.net, range, &w.data);
  builder.prepare();
  NonconservationOptions opt;
  opt.steps = get<std::size_t>(c, "steps");
  if (!unset(c, "learning_rate")) opt.learning_rate = get<double>(c, "learning_rate");
  opt.cls = unset(c, "class")
                ? predict(w.net, Tensor(w.net.input_shape(), range.mid()))
                : get<std::size_t>(c, "class");
  std::vector<NamedInput> subs = {
      {"zero", Tensor(w.net.input_shape(), range.clip(0.0))},
      {"xentr", builder.max_entropy_full_result().baseline.materialized}};
  for (AblationTarget t :
       {AblationTarget::kLogit, AblationTarget::kSoftmax, AblationTarget::kEntropy}) {
    opt.target = t;
    NonconservationResult r = nonconservation_demo(w.net, range, opt, subs);
    const char* name = t == AblationTarget::kLogit     ? "logit"
                       : t == AblationTarget::kSoftmax ? "softmax"
                                                       : "entropy";
    std::vector<double> steps(r.trajectory.size());
    std::iota(steps.begin(), steps.end(), 0.0);
    write_two_column_csv(w.out / (std::string("trajectory_") + name + ".csv"), "step",
                         "value", steps, r.trajectory);
    auto os = open_output(w.out / (std::string("markers_") + name + ".csv"));
    os << "substitute,value,residue\n";
    os << "best_found," << fmt_double(r.best_value) << ",0\n";
    for (const auto& m : r.markers) {
      os << m.name << ',' << fmt_double(m.value) << ',' << fmt_double(m.residue) << '\n';
    }
  }
  write_config(w);
  return kOk;
}

int cmd_explain(const json& cfg) {
  Workspace w = open_workspace(cfg, true);
  const json& e = section(cfg, "explain");
  BaselineBuilder builder(w.net, w.data.value_range, &w.data);
  builder.prepare();
  Explainer ex(w.net, builder, explain_options(cfg));
  const Tensor& x = test_instance(w, get<std::size_t>(e, "instance"));
  const std::size_t cls = predict(w.net, x);
  for (const MethodSpec& m : parse_methods(section(e, "methods"))) {
    export_attribution(w.out / "attributions" / m.tag(), ex.explain(m, x, cls, w.seed), w.seed);
  }
  write_raw_f64(w.out / "instance.f64", x);
  write_config(w);
  std::printf("explained class %zu\n", cls);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxent: maximum-entropy baseline experiments"};
  app.require_subcommand(1);
  Flags flags;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const json&);
  };
  const Entry entries[] = {
      {"train", "train a model and write model.txt", cmd_train},
      {"baseline", "materialize baselines for one instance", cmd_baseline},
      {"sweep", "scalar baseline sweep against a reference", cmd_sweep},
      {"invariance", "linear input-shift invariance table", cmd_invariance},
      {"evaluate", "method x baseline ablation matrix", cmd_evaluate},
      {"nonconservation", "descent trajectories for the ablation targets", cmd_nonconservation},
      {"explain", "single-instance attribution dump", cmd_explain},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("-c,--config", flags.config_path, "JSON config file");
    sub->add_option("--set", flags.sets, "override a config field: key.path=value");
    sub->add_option("--seed", flags.seed, "run seed (default 0)");
    sub->add_option("-j,--jobs", flags.jobs, "worker threads");
    sub->add_option("-o,--out", flags.out, std::string("output directory (default $") +
                                               kOutEnv + " or ./maxent_out)");
    sub->add_option("--dataset", flags.dataset, "toy, glyph or idx");
    sub->add_option("--model", flags.model, "model file to load instead of training");
    sub->add_option("--methods", flags.methods, "comma-separated method tags");
    sub->add_option("--baselines", flags.baselines, "comma-separated baseline names");
    subs.emplace_back(sub, &e);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }
  try {
    json cfg = resolve_config(flags);
    for (auto& [sub, entry] : subs) {
      if (sub->parsed()) return entry->run(cfg);
    }
    return kConfigError;
  } catch (const SpecError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const UnsupportedError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kDataError;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kDataError;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kNumericError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kOther;
  }
}
