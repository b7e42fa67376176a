#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impair/dataset.hpp"
#include "impair/model.hpp"

namespace impair {

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;  // fold index per sample

  std::vector<std::size_t> fold_sizes() const;
  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

// Stratified: each class is shuffled with Rng(seed) (class 0 first), the two
// shuffled lists are concatenated and position p goes to fold p mod k. This
// keeps both overall and per-class fold counts within 1 of each other.
// Unstratified: one shuffle of all rows, same dealing.
FoldPlan stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed, bool stratified = true);

struct RatePair {
  double rate = 0.0;        // TPR (per true class) or PPV (per predicted class)
  double complement = 0.0;  // FNR or FDR
};

struct ConfusionMatrix {
  // counts[truth][predicted]
  std::array<std::array<std::size_t, 2>, 2> counts{};

  void add(Label truth, Label predicted) { ++counts[to_int(truth)][to_int(predicted)]; }
  std::size_t total() const;
  std::size_t correct() const { return counts[0][0] + counts[1][1]; }
  double accuracy() const;
  std::size_t truth_count(Label l) const;
  std::size_t predicted_count(Label l) const;

  // Empty when the class has no true samples / no predictions.
  std::optional<RatePair> tpr_fnr(Label truth) const;
  std::optional<RatePair> ppv_fdr(Label predicted) const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct EvalReport {
  std::string classifier;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::array<std::optional<RatePair>, 2> tpr_fnr;
  std::array<std::optional<RatePair>, 2> ppv_fdr;
  std::vector<Label> predictions;  // aligned with the dataset rows
  std::vector<std::size_t> fold_sizes;
  std::vector<std::size_t> fold_correct;
};

EvalReport make_report(std::string classifier, std::span<const Label> truth, std::span<const Label> predicted);

using Predictor = std::function<Prediction(std::span<const double>)>;
// Fits on a training fold and returns a predictor for that fold.
using Learner = std::function<Predictor(const TrainingSet& train, std::uint64_t seed)>;

// Fold f is fitted with seed derive_seed(seed, "fit:<name>:fold:<f>").
// Predictions from all folds are pooled into one confusion matrix. A fit
// failure is rethrown as Error naming the fold.
EvalReport cross_validate(const Dataset& ds, const std::string& name, const Learner& learner, const FoldPlan& plan,
                          std::uint64_t seed);
EvalReport cross_validate(const Dataset& ds, const Preset& preset, const FoldPlan& plan, std::uint64_t seed);

Learner preset_learner(const Preset& preset);

struct LeaderboardRow {
  EvalReport report;
  std::size_t rank = 0;
  bool winner = false;
};

struct LeaderboardOptions {
  std::size_t k = 5;
  std::uint64_t seed = 7;
  bool stratified = true;
  bool parallel = true;
};

std::vector<std::string> leaderboard_names();

// All presets share one FoldPlan built with derive_seed(seed, "folds").
// Rows keep input order. Ranks order by accuracy with ties sharing a rank;
// the winner is the earliest row with rank 1. Unknown names throw before any
// fitting starts.
std::vector<LeaderboardRow> run_leaderboard(const Dataset& ds, const std::vector<std::string>& presets,
                                            const LeaderboardOptions& opt = {});

// Accuracy as a percentage with one decimal, e.g. "81.9".
std::string format_percent(double accuracy);

std::string render_leaderboard_text(const std::vector<LeaderboardRow>& rows);
std::string render_leaderboard_csv(const std::vector<LeaderboardRow>& rows);
std::string report_to_json(const EvalReport& r);

struct PlotTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

// Columns BAC, PulseRate, Target with values copied verbatim.
PlotTable export_scatter(const Dataset& ds);

// Columns BAC, PulseRate (each min-max scaled to [0, 1]; a constant column
// maps to 0), Target, Predicted, Correct (1/0).
PlotTable export_parallel_coords(const Dataset& ds, std::span<const Label> predictions);

}  // namespace impair
