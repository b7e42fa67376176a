#include "impair/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <numeric>
#include <sstream>

#include "impair/error.hpp"
#include "impair/rng.hpp"
#include "json.hpp"

namespace impair {

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t f : assignment) ++sizes[f];
  return sizes;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(i);
  return out;
}

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

FoldPlan stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed, bool stratified) {
  if (k < 2) throw Error("k-fold: k must be at least 2");
  Rng rng(seed);
  std::vector<std::size_t> order;
  if (stratified) {
    for (Label l : {Label::Normal, Label::Induced}) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.samples[i].target == l) members.push_back(i);
      if (members.size() < k)
        throw Error("k-fold: class " + std::to_string(to_int(l)) + " has " + std::to_string(members.size()) +
                    " samples, fewer than k=" + std::to_string(k));
      shuffle(members, rng);
      order.insert(order.end(), members.begin(), members.end());
    }
  } else {
    if (ds.size() < k) throw Error("k-fold: fewer samples than folds");
    order.resize(ds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, rng);
  }
  FoldPlan plan;
  plan.k = k;
  plan.assignment.assign(ds.size(), 0);
  for (std::size_t p = 0; p < order.size(); ++p) plan.assignment[order[p]] = p % k;
  return plan;
}

std::size_t ConfusionMatrix::total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }

double ConfusionMatrix::accuracy() const {
  const std::size_t t = total();
  return t == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(t);
}

std::size_t ConfusionMatrix::truth_count(Label l) const {
  const auto& r = counts[to_int(l)];
  return r[0] + r[1];
}

std::size_t ConfusionMatrix::predicted_count(Label l) const { return counts[0][to_int(l)] + counts[1][to_int(l)]; }

std::optional<RatePair> ConfusionMatrix::tpr_fnr(Label truth) const {
  const std::size_t n = truth_count(truth);
  if (n == 0) return std::nullopt;
  const std::size_t hit = counts[to_int(truth)][to_int(truth)];
  return RatePair{static_cast<double>(hit) / static_cast<double>(n), static_cast<double>(n - hit) / static_cast<double>(n)};
}

std::optional<RatePair> ConfusionMatrix::ppv_fdr(Label predicted) const {
  const std::size_t n = predicted_count(predicted);
  if (n == 0) return std::nullopt;
  const std::size_t hit = counts[to_int(predicted)][to_int(predicted)];
  return RatePair{static_cast<double>(hit) / static_cast<double>(n), static_cast<double>(n - hit) / static_cast<double>(n)};
}

EvalReport make_report(std::string classifier, std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) throw Error("make_report: truth and predictions differ in length");
  EvalReport r;
  r.classifier = std::move(classifier);
  for (std::size_t i = 0; i < truth.size(); ++i) r.confusion.add(truth[i], predicted[i]);
  r.accuracy = r.confusion.accuracy();
  for (Label l : {Label::Normal, Label::Induced}) {
    r.tpr_fnr[to_int(l)] = r.confusion.tpr_fnr(l);
    r.ppv_fdr[to_int(l)] = r.confusion.ppv_fdr(l);
  }
  r.predictions.assign(predicted.begin(), predicted.end());
  return r;
}

EvalReport cross_validate(const Dataset& ds, const std::string& name, const Learner& learner, const FoldPlan& plan,
                          std::uint64_t seed) {
  if (plan.assignment.size() != ds.size()) throw Error("cross_validate: fold plan does not match dataset size");
  const TrainingSet all = to_training_set(ds);
  std::vector<Label> truth(all.y);
  std::vector<Label> predicted(ds.size(), Label::Normal);
  std::vector<std::size_t> fold_sizes(plan.k, 0);
  std::vector<std::size_t> fold_correct(plan.k, 0);

  for (std::size_t f = 0; f < plan.k; ++f) {
    const auto train_idx = plan.train_rows(f);
    const auto test_idx = plan.test_rows(f);
    Predictor predictor;
    try {
      predictor = learner(all.subset_rows(train_idx), derive_seed(seed, "fit:" + name + ":fold:" + std::to_string(f)));
    } catch (const std::exception& e) {
      throw Error(name + ": fold " + std::to_string(f) + ": " + e.what());
    }
    for (std::size_t i : test_idx) {
      predicted[i] = predictor(all.row(i)).label;
      ++fold_sizes[f];
      if (predicted[i] == truth[i]) ++fold_correct[f];
    }
  }
  EvalReport r = make_report(name, truth, predicted);
  r.fold_sizes = std::move(fold_sizes);
  r.fold_correct = std::move(fold_correct);
  return r;
}

Learner preset_learner(const Preset& preset) {
  return [preset](const TrainingSet& train, std::uint64_t seed) -> Predictor {
    auto model = std::make_shared<const TrainedModel>(fit_preset(preset, train, seed));
    return [model](std::span<const double> x) { return predict(*model, x); };
  };
}

EvalReport cross_validate(const Dataset& ds, const Preset& preset, const FoldPlan& plan, std::uint64_t seed) {
  return cross_validate(ds, preset.name, preset_learner(preset), plan, seed);
}

std::vector<std::string> leaderboard_names() {
  std::vector<std::string> names;
  for (const Preset& p : leaderboard_presets()) names.push_back(p.name);
  return names;
}

std::vector<LeaderboardRow> run_leaderboard(const Dataset& ds, const std::vector<std::string>& presets,
                                            const LeaderboardOptions& opt) {
  if (presets.empty()) throw Error("leaderboard: preset list is empty");
  std::vector<const Preset*> resolved;
  for (const auto& name : presets) resolved.push_back(&find_preset(name));
  require_trainable(ds);
  const FoldPlan plan = stratified_kfold(ds, opt.k, derive_seed(opt.seed, "folds"), opt.stratified);

  std::vector<LeaderboardRow> rows(resolved.size());
  if (opt.parallel) {
    std::vector<std::future<EvalReport>> jobs;
    for (const Preset* p : resolved)
      jobs.push_back(std::async(std::launch::async, [&, p] { return cross_validate(ds, *p, plan, opt.seed); }));
    for (std::size_t i = 0; i < jobs.size(); ++i) rows[i].report = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < resolved.size(); ++i) rows[i].report = cross_validate(ds, *resolved[i], plan, opt.seed);
  }

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].report.confusion.correct() > rows[b].report.confusion.correct();
  });
  // Competition ranking: equal accuracy shares the better rank (1, 2, 2, 4).
  for (std::size_t r = 0; r < order.size(); ++r) {
    const bool tied = r > 0 && rows[order[r]].report.confusion.correct() == rows[order[r - 1]].report.confusion.correct();
    rows[order[r]].rank = tied ? rows[order[r - 1]].rank : r + 1;
  }
  rows[order.front()].winner = true;
  return rows;
}

std::string format_percent(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * accuracy);
  return buf;
}

std::string render_leaderboard_text(const std::vector<LeaderboardRow>& rows) {
  std::size_t width = std::string("Classifier").size();
  for (const auto& r : rows) width = std::max(width, r.report.classifier.size());
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-4s  %-*s  %12s\n", "Rank", static_cast<int>(width), "Classifier", "Accuracy (%)");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%4zu  %-*s  %12s%s\n", r.rank, static_cast<int>(width), r.report.classifier.c_str(),
                  format_percent(r.report.accuracy).c_str(), r.winner ? "  <- best" : "");
    out << line;
  }
  return out.str();
}

std::string render_leaderboard_csv(const std::vector<LeaderboardRow>& rows) {
  std::string out = "Classifier,AccuracyPct\n";
  for (const auto& r : rows) out += r.report.classifier + "," + format_percent(r.report.accuracy) + "\n";
  return out;
}

namespace {

nlohmann::ordered_json rates_json(const std::optional<RatePair>& p, const char* a, const char* b) {
  if (!p) return nullptr;
  return {{a, p->rate}, {b, p->complement}};
}

}  // namespace

std::string report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["classifier"] = r.classifier;
  j["accuracy"] = r.accuracy;
  j["accuracy_pct"] = format_percent(r.accuracy);
  j["confusion"] = {{r.confusion.counts[0][0], r.confusion.counts[0][1]},
                    {r.confusion.counts[1][0], r.confusion.counts[1][1]}};
  j["tpr_fnr"] = {{"0", rates_json(r.tpr_fnr[0], "tpr", "fnr")}, {"1", rates_json(r.tpr_fnr[1], "tpr", "fnr")}};
  j["ppv_fdr"] = {{"0", rates_json(r.ppv_fdr[0], "ppv", "fdr")}, {"1", rates_json(r.ppv_fdr[1], "ppv", "fdr")}};
  j["fold_sizes"] = r.fold_sizes;
  j["fold_correct"] = r.fold_correct;
  return j.dump(2) + "\n";
}

std::string PlotTable::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_real(row[c]);
    out += '\n';
  }
  return out;
}

PlotTable export_scatter(const Dataset& ds) {
  PlotTable t;
  t.columns = {"BAC", "PulseRate", "Target"};
  for (const Sample& s : ds.samples) t.rows.push_back({s.bac, s.pulse_rate, static_cast<double>(to_int(s.target))});
  return t;
}

PlotTable export_parallel_coords(const Dataset& ds, std::span<const Label> predictions) {
  if (predictions.size() != ds.size())
    throw Error("export_parallel_coords: " + std::to_string(predictions.size()) + " predictions for " +
                std::to_string(ds.size()) + " samples");
  auto scaler = [&](double Sample::*field) {
    double lo = 0.0, hi = 0.0;
    if (!ds.samples.empty()) {
      lo = hi = ds.samples.front().*field;
      for (const Sample& s : ds.samples) {
        lo = std::min(lo, s.*field);
        hi = std::max(hi, s.*field);
      }
    }
    return [lo, hi](double v) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; };
  };
  const auto bac = scaler(&Sample::bac);
  const auto pulse = scaler(&Sample::pulse_rate);
  PlotTable t;
  t.columns = {"BAC", "PulseRate", "Target", "Predicted", "Correct"};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Sample& s = ds.samples[i];
    t.rows.push_back({bac(s.bac), pulse(s.pulse_rate), static_cast<double>(to_int(s.target)),
                      static_cast<double>(to_int(predictions[i])), predictions[i] == s.target ? 1.0 : 0.0});
  }
  return t;
}

}  // namespace impair
