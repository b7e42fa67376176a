#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "impair/error.hpp"
#include "impair/evaluation.hpp"
#include "support.hpp"

using namespace impair;

namespace {

Dataset random_dataset(Rng& rng, std::size_t n0, std::size_t n1) {
  Dataset ds;
  ds.name = "random";
  for (std::size_t i = 0; i < n0 + n1; ++i)
    ds.samples.push_back({rng.uniform() * 0.2, rng.uniform() * 6.0, i < n0 ? Label::Normal : Label::Induced});
  // Interleave so class membership is not tied to position.
  for (std::size_t i = ds.size() - 1; i > 0; --i) std::swap(ds.samples[i], ds.samples[rng.below(i + 1)]);
  return ds;
}

Learner constant_learner(Label l) {
  return [l](const TrainingSet&, std::uint64_t) -> Predictor {
    return [l](std::span<const double>) { return Prediction{l, l == Label::Induced ? 1.0 : 0.0}; };
  };
}

void check_identities(const EvalReport& r) {
  const auto& c = r.confusion;
  CHECK(r.accuracy == doctest::Approx(static_cast<double>(c.correct()) / static_cast<double>(c.total())));
  for (Label l : {Label::Normal, Label::Induced}) {
    const auto t = c.tpr_fnr(l);
    CHECK(t.has_value() == (c.truth_count(l) > 0));
    if (t) CHECK(t->rate + t->complement == doctest::Approx(1.0).epsilon(1e-15));
    const auto p = c.ppv_fdr(l);
    CHECK(p.has_value() == (c.predicted_count(l) > 0));
    if (p) CHECK(p->rate + p->complement == doctest::Approx(1.0).epsilon(1e-15));
  }
}

const std::vector<std::string> kReferenceNames = {
    "Fine Tree",          "Medium Tree",         "Coarse Tree",           "Linear Discriminant",
    "Quadratic Discriminant", "Logistic Regression", "Linear SVM",        "Quadratic SVM",
    "Cubic SVM",          "Fine Gaussian SVM",   "Medium Gaussian SVM",   "Coarse Gaussian SVM",
    "Fine KNN",           "Medium KNN",          "Coarse KNN",            "Cosine KNN",
    "Cubic KNN",          "Weighted KNN",        "Boosted Trees",         "Baged Trees",
    "Subspace Discriminant", "Subspace KNN",     "RUSBoosted Trees"};

}  // namespace

TEST_CASE("199 samples split into 40/40/40/40/39") {
  const Dataset ds = generate_synthetic(GeneratorConfig{});
  const FoldPlan plan = stratified_kfold(ds, 5, 7);
  auto sizes = plan.fold_sizes();
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  CHECK(sizes == std::vector<std::size_t>{40, 40, 40, 40, 39});
}

TEST_CASE("ten samples give one of each class per fold") {
  Dataset ds;
  for (int i = 0; i < 10; ++i) ds.samples.push_back({0.0, static_cast<double>(i), i < 5 ? Label::Normal : Label::Induced});
  const FoldPlan plan = stratified_kfold(ds, 5, 3);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto rows = plan.test_rows(f);
    REQUIRE(rows.size() == 2);
    CHECK(ds.samples[rows[0]].target != ds.samples[rows[1]].target);
  }
}

TEST_CASE("fold plans partition and stratify random datasets") {
  Rng rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng.below(9);
    const Dataset ds = random_dataset(rng, k + rng.below(60), k + rng.below(60));
    const FoldPlan plan = stratified_kfold(ds, k, rng.next_u64());
    REQUIRE(plan.assignment.size() == ds.size());
    std::vector<std::size_t> seen;
    for (std::size_t f = 0; f < k; ++f) {
      const auto test = plan.test_rows(f);
      const auto train = plan.train_rows(f);
      CHECK(test.size() + train.size() == ds.size());
      seen.insert(seen.end(), test.begin(), test.end());
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i) REQUIRE(seen[i] == i);

    const auto sizes = plan.fold_sizes();
    CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
    for (Label l : {Label::Normal, Label::Induced}) {
      std::vector<std::size_t> per(k, 0);
      for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.samples[i].target == l) ++per[plan.assignment[i]];
      CHECK(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) <= 1);
    }
  }
}

TEST_CASE("fold plans are seeded") {
  Rng rng(1);
  const Dataset ds = random_dataset(rng, 30, 30);
  CHECK(stratified_kfold(ds, 5, 9).assignment == stratified_kfold(ds, 5, 9).assignment);
  CHECK(stratified_kfold(ds, 5, 9).assignment != stratified_kfold(ds, 5, 10).assignment);
  const FoldPlan loose = stratified_kfold(ds, 5, 9, false);
  auto sizes = loose.fold_sizes();
  CHECK(std::all_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s == 12; }));
}

TEST_CASE("fold plan errors") {
  Rng rng(1);
  const Dataset ds = random_dataset(rng, 3, 10);
  CHECK_THROWS_AS(stratified_kfold(ds, 5, 1), Error);
  CHECK_THROWS_AS(stratified_kfold(ds, 1, 1), Error);
}

TEST_CASE("always-one learner on a 60 percent class-1 dataset") {
  Dataset ds;
  for (int i = 0; i < 50; ++i) ds.samples.push_back({0.0, static_cast<double>(i), i < 20 ? Label::Normal : Label::Induced});
  const auto plan = stratified_kfold(ds, 5, 1);
  const EvalReport r = cross_validate(ds, "always one", constant_learner(Label::Induced), plan, 1);
  CHECK(r.accuracy == doctest::Approx(0.6));
  CHECK(r.tpr_fnr[1]->rate == 1.0);
  CHECK(r.tpr_fnr[0]->rate == 0.0);
  CHECK(r.ppv_fdr[1]->rate == doctest::Approx(0.6));
  CHECK_FALSE(r.ppv_fdr[0].has_value());
  check_identities(r);
}

TEST_CASE("hand-built report") {
  const std::vector<Label> truth{Label::Induced, Label::Normal, Label::Normal, Label::Induced};
  const std::vector<Label> pred{Label::Induced, Label::Induced, Label::Normal, Label::Normal};
  const EvalReport r = make_report("x", truth, pred);
  CHECK(r.confusion.counts[0][0] == 1);
  CHECK(r.confusion.counts[0][1] == 1);
  CHECK(r.confusion.counts[1][0] == 1);
  CHECK(r.confusion.counts[1][1] == 1);
  CHECK(r.accuracy == 0.5);
  for (int c = 0; c < 2; ++c) {
    CHECK(r.tpr_fnr[c]->rate == 0.5);
    CHECK(r.tpr_fnr[c]->complement == 0.5);
    CHECK(r.ppv_fdr[c]->rate == 0.5);
    CHECK(r.ppv_fdr[c]->complement == 0.5);
  }
}

TEST_CASE("swapping truth and prediction transposes the rates") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Label> a, b;
    const auto n = 1 + rng.below(30);
    for (std::uint64_t i = 0; i < n; ++i) {
      a.push_back(rng.below(2) ? Label::Induced : Label::Normal);
      b.push_back(rng.below(2) ? Label::Induced : Label::Normal);
    }
    const auto ab = make_report("ab", a, b), ba = make_report("ba", b, a);
    for (int t = 0; t < 2; ++t)
      for (int p = 0; p < 2; ++p) CHECK(ab.confusion.counts[t][p] == ba.confusion.counts[p][t]);
    for (int c = 0; c < 2; ++c) {
      CHECK(ab.tpr_fnr[c].has_value() == ba.ppv_fdr[c].has_value());
      if (ab.tpr_fnr[c]) CHECK(ab.tpr_fnr[c]->rate == ba.ppv_fdr[c]->rate);
    }
    check_identities(ab);
  }
}

TEST_CASE("pooled accuracy equals the size-weighted fold mean") {
  Rng rng(77);
  const Dataset ds = random_dataset(rng, 43, 38);
  const auto plan = stratified_kfold(ds, 5, 2);
  const EvalReport r = cross_validate(ds, find_preset("Medium Tree"), plan, 2);
  double weighted = 0.0;
  for (std::size_t f = 0; f < plan.k; ++f) {
    const auto rows = plan.test_rows(f);
    double correct = 0;
    for (auto i : rows) correct += r.predictions[i] == ds.samples[i].target;
    weighted += static_cast<double>(rows.size()) / static_cast<double>(ds.size()) * (correct / static_cast<double>(rows.size()));
    CHECK(r.fold_correct[f] == static_cast<std::size_t>(correct));
    CHECK(r.fold_sizes[f] == rows.size());
  }
  CHECK(std::abs(weighted - r.accuracy) <= 1e-12);
  check_identities(r);
}

TEST_CASE("fit failures name the fold") {
  Rng rng(3);
  const Dataset ds = random_dataset(rng, 20, 20);
  const auto plan = stratified_kfold(ds, 4, 1);
  Learner bad = [](const TrainingSet&, std::uint64_t) -> Predictor { throw Error("boom"); };
  try {
    cross_validate(ds, "bad", bad, plan, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("fold 0") != std::string::npos);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("default leaderboard has the reference rows in order") {
  CHECK(leaderboard_names() == kReferenceNames);
  CHECK(find_preset("Bagged Trees").name == "Baged Trees");
  CHECK_THROWS_AS(find_preset("Deep Net"), Error);
}

TEST_CASE("leaderboard runs are reproducible and scheduling independent") {
  const Dataset ds = generate_synthetic(GeneratorConfig{});
  LeaderboardOptions par;
  LeaderboardOptions ser;
  ser.parallel = false;
  const auto a = run_leaderboard(ds, leaderboard_names(), par);
  const auto b = run_leaderboard(ds, leaderboard_names(), par);
  const auto c = run_leaderboard(ds, leaderboard_names(), ser);
  REQUIRE(a.size() == 23);
  CHECK(render_leaderboard_text(a) == render_leaderboard_text(b));
  CHECK(render_leaderboard_text(a) == render_leaderboard_text(c));
  CHECK(render_leaderboard_csv(a) == render_leaderboard_csv(c));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].report.classifier == kReferenceNames[i]);
    CHECK(report_to_json(a[i].report) == report_to_json(c[i].report));
    check_identities(a[i].report);
  }
  CHECK(std::count_if(a.begin(), a.end(), [](const auto& r) { return r.winner; }) == 1);
}

TEST_CASE("ranks follow accuracy with shared ranks on ties") {
  const Dataset ds = generate_synthetic(GeneratorConfig{});
  const auto rows = run_leaderboard(ds, leaderboard_names());
  for (const auto& r : rows) {
    std::size_t better = 0;
    for (const auto& o : rows) better += o.report.confusion.correct() > r.report.confusion.correct();
    CHECK(r.rank == better + 1);
  }
  const auto dup = run_leaderboard(ds, {"Fine Tree", "Fine Tree"});
  CHECK(dup[0].rank == 1);
  CHECK(dup[1].rank == 1);
  CHECK(dup[0].winner);
  CHECK_FALSE(dup[1].winner);
}

TEST_CASE("single preset leaderboard") {
  const Dataset ds = generate_synthetic(GeneratorConfig{});
  const auto rows = run_leaderboard(ds, {"Boosted Trees"});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].rank == 1);
  CHECK(rows[0].winner);
  CHECK(render_leaderboard_text(rows).find("<- best") != std::string::npos);
  CHECK_THROWS_AS(run_leaderboard(ds, {"Nope"}), Error);
  CHECK_THROWS_AS(run_leaderboard(ds, {}), Error);
}

TEST_CASE("percent formatting") {
  CHECK(format_percent(0.819) == "81.9");
  CHECK(format_percent(1.0) == "100.0");
  CHECK(format_percent(163.0 / 199.0) == "81.9");
}

TEST_CASE("scatter export is verbatim") {
  Dataset ds;
  ds.samples = {{0.0, 0.05, Label::Normal}, {0.25, 1.95, Label::Induced}};
  const auto t = export_scatter(ds);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.to_csv() == "BAC,PulseRate,Target\n0,0.05,0\n0.25,1.95,1\n");
}

TEST_CASE("parallel coordinates normalize by re-scan") {
  Rng rng(12);
  const Dataset ds = random_dataset(rng, 20, 25);
  std::vector<Label> pred;
  for (const auto& s : ds.samples) pred.push_back(s.target);
  const auto all_right = export_parallel_coords(ds, pred);
  for (const auto& row : all_right.rows) CHECK(row[4] == 1.0);

  pred[3] = pred[3] == Label::Induced ? Label::Normal : Label::Induced;
  const auto t = export_parallel_coords(ds, pred);
  CHECK(t.columns == std::vector<std::string>{"BAC", "PulseRate", "Target", "Predicted", "Correct"});
  for (std::size_t c = 0; c < 2; ++c) {
    double lo = 1e300, hi = -1e300;
    for (const auto& row : t.rows) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
    }
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
  }
  std::size_t wrong = 0;
  for (const auto& row : t.rows) wrong += row[4] == 0.0;
  CHECK(wrong == 1);
  CHECK(t.rows[3][4] == 0.0);
  CHECK_THROWS_AS(export_parallel_coords(ds, std::vector<Label>(3)), Error);
}

TEST_CASE("constant column maps to zero") {
  Dataset ds;
  ds.samples = {{0.1, 1.0, Label::Normal}, {0.1, 2.0, Label::Induced}};
  const std::vector<Label> pred{Label::Normal, Label::Induced};
  const auto t = export_parallel_coords(ds, pred);
  CHECK(t.rows[0][0] == 0.0);
  CHECK(t.rows[1][0] == 0.0);
}
