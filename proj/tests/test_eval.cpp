#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bfcs/eval.hpp"
#include "bfcs/rng.hpp"
#include "test_support.hpp"

using namespace bfcs;
using Catch::Approx;

namespace {

ScoredEdges make_edges(std::initializer_list<std::pair<double, int>> pairs) {
    ScoredEdges s;
    for (const auto& [p, l] : pairs) {
        s.prob.push_back(p);
        s.label.push_back(l);
    }
    return s;
}

}  // namespace

TEST_CASE("perfect separation scores perfectly") {
    const auto s = make_edges({{0.9, 1}, {0.8, 1}, {0.2, 0}, {0.1, 0}});
    CHECK(roc_curve(s).auc == Approx(1.0).margin(1e-15));
    CHECK(pr_curve(s).auprc == Approx(1.0).margin(1e-15));
}

TEST_CASE("confident predictions bound the Brier score") {
    CHECK(brier_score(make_edges({{1.0, 1}, {0.0, 0}})) == 0.0);
    CHECK(brier_score(make_edges({{0.0, 1}, {1.0, 0}})) == 1.0);
}

TEST_CASE("hand-enumerated four-pair sweep") {
    // scores (0.9, 0.8, 0.8, 0.4), labels (1, 1, 0, 0); P = N = 2.
    // ROC points: (0,0) -> (0,0.5) at 0.9 -> (0.5,1) at 0.8 -> (1,1) at 0.4
    //   AUC = 0.5*(0.5+1)/2 + 0.5*1 = 0.875
    // PR sweep: t=0.9: P=1,   R=0.5 -> adds 0.5
    //           t=0.8: P=2/3, R=1   -> adds 1/3
    //           t=0.4: P=0.5, R=1   -> adds 0
    //   area = 5/6
    // Brier = (0.01 + 0.04 + 0.64 + 0.16) / 4 = 0.2125
    const auto s = make_edges({{0.9, 1}, {0.8, 1}, {0.8, 0}, {0.4, 0}});

    const auto roc = roc_curve(s);
    REQUIRE(roc.points.size() == 4);
    CHECK(roc.points[1].fpr == 0.0);
    CHECK(roc.points[1].tpr == 0.5);
    CHECK(roc.points[2].fpr == 0.5);
    CHECK(roc.points[2].tpr == 1.0);
    CHECK(roc.points[3].fpr == 1.0);
    CHECK(roc.auc == Approx(0.875).margin(1e-15));

    const auto pr = pr_curve(s);
    REQUIRE(pr.points.size() == 3);
    CHECK(pr.points[0].precision == 1.0);
    CHECK(pr.points[0].recall == 0.5);
    CHECK(pr.points[1].precision == Approx(2.0 / 3.0).margin(1e-15));
    CHECK(pr.points[1].recall == 1.0);
    CHECK(pr.points[2].precision == 0.5);
    CHECK(pr.auprc == Approx(5.0 / 6.0).margin(1e-15));

    CHECK(brier_score(s) == Approx(0.2125).margin(1e-15));
}

TEST_CASE("random scores hover near AUC 0.5") {
    Rng rng(139);
    ScoredEdges s;
    for (int i = 0; i < 20000; ++i) {
        s.prob.push_back(uniform01(rng));
        s.label.push_back(uniform01(rng) < 0.3 ? 1 : 0);
    }
    CHECK(roc_curve(s).auc == Approx(0.5).margin(0.02));
}

TEST_CASE("constant scores collapse to prevalence") {
    const auto s = make_edges({{0.4, 1}, {0.4, 0}, {0.4, 0}, {0.4, 1}, {0.4, 0}});
    const auto pr = pr_curve(s);
    REQUIRE(pr.points.size() == 1);
    CHECK(pr.points[0].precision == Approx(0.4).margin(1e-15));  // 2 of 5
    CHECK(pr.points[0].recall == 1.0);
    CHECK(pr.auprc == Approx(0.4).margin(1e-15));
}

TEST_CASE("AUC is invariant under strictly monotone score transforms") {
    Rng rng(149);
    ScoredEdges s;
    for (int i = 0; i < 500; ++i) {
        s.prob.push_back(uniform01(rng));
        s.label.push_back(uniform01(rng) < 0.2 ? 1 : 0);
    }
    const double base = roc_curve(s).auc;
    ScoredEdges warped = s;
    for (auto& p : warped.prob) p = 1.0 / (1.0 + std::exp(-7.0 * (p - 0.3)));
    CHECK(roc_curve(warped).auc == Approx(base).margin(1e-12));
}

TEST_CASE("degenerate labels raise") {
    CHECK_THROWS_AS(roc_curve(make_edges({{0.5, 1}, {0.6, 1}})), DataError);
    CHECK_THROWS_AS(roc_curve(make_edges({{0.5, 0}, {0.6, 0}})), DataError);
    CHECK_THROWS_AS(pr_curve(make_edges({{0.5, 0}, {0.6, 0}})), DataError);
    CHECK_NOTHROW(pr_curve(make_edges({{0.5, 1}, {0.6, 1}})));
    CHECK_THROWS_AS(brier_score(ScoredEdges{}), DataError);
}

TEST_CASE("prevalence is the best constant Brier predictor") {
    Rng rng(151);
    ScoredEdges s;
    for (int i = 0; i < 2000; ++i) {
        s.prob.push_back(0.0);
        s.label.push_back(uniform01(rng) < 0.25 ? 1 : 0);
    }
    const double prevalence =
        static_cast<double>(s.positives()) / static_cast<double>(s.size());
    const auto with_constant = [&](double c) {
        ScoredEdges t = s;
        for (auto& p : t.prob) p = c;
        return brier_score(t);
    };
    const double at_prevalence = with_constant(prevalence);
    for (const double c : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        CHECK(at_prevalence <= with_constant(c));
    }
}

TEST_CASE("score_edges pairs a matrix with a truth set") {
    RegulationMatrix m;
    m.trait_names = {"T1", "T2", "T3"};
    m.prob = {0, 0.9, 0.2, 0.1, 0, 0.8, 0.3, 0.4, 0};
    m.best_marker.assign(9, 0);
    const std::set<std::pair<std::string, std::string>> truth = {{"T1", "T2"},
                                                                 {"T2", "T3"}};
    const auto s = score_edges(m, truth);
    REQUIRE(s.size() == 6);
    CHECK(s.positives() == 2);
    // row-major order skipping the diagonal: (1,2),(1,3),(2,1),(2,3),(3,1),(3,2)
    CHECK(s.prob == std::vector<double>{0.9, 0.2, 0.1, 0.8, 0.3, 0.4});
    CHECK(s.label == std::vector<int>{1, 0, 0, 1, 0, 0});

    CHECK_THROWS_AS(score_edges(m, {{"T1", "T9"}}), DataError);
}

TEST_CASE("file-based scoring enforces a complete pair set") {
    test_support::TempDir dir("eval_files");
    const auto pred = dir.file("pred.tsv");
    const auto truth = dir.file("truth.tsv");
    test_support::write_file(truth, "source\ttarget\tcoefficient\nT1\tT2\t0.5\n");

    SECTION("complete predictions evaluate") {
        test_support::write_file(pred,
                                 "regulator\ttarget\tprobability\tbest_marker\n"
                                 "T1\tT2\t0.9\tL1\n"
                                 "T2\tT1\t0.1\tL1\n");
        const auto s = score_prediction_files(pred, truth);
        CHECK(s.size() == 2);
        CHECK(s.positives() == 1);
        const auto metrics = evaluate(s);
        CHECK(metrics.auc_roc == 1.0);
        CHECK(metrics.auprc == 1.0);
    }

    SECTION("missing pair names the gap") {
        test_support::write_file(pred,
                                 "regulator\ttarget\tprobability\tbest_marker\n"
                                 "T1\tT2\t0.9\tL1\n"
                                 "T2\tT3\t0.2\tL1\n"
                                 "T3\tT2\t0.2\tL1\n"
                                 "T1\tT3\t0.2\tL1\n"
                                 "T3\tT1\t0.2\tL1\n");
        CHECK_THROWS_WITH(score_prediction_files(pred, truth),
                          Catch::Matchers::ContainsSubstring("T2 -> T1"));
    }

    SECTION("out-of-range probabilities are rejected") {
        test_support::write_file(pred,
                                 "regulator\ttarget\tprobability\tbest_marker\n"
                                 "T1\tT2\tnan\tL1\n"
                                 "T2\tT1\t0.1\tL1\n");
        CHECK_THROWS_AS(score_prediction_files(pred, truth), DataError);
        test_support::write_file(pred,
                                 "regulator\ttarget\tprobability\tbest_marker\n"
                                 "T1\tT2\t1.5\tL1\n"
                                 "T2\tT1\t0.1\tL1\n");
        CHECK_THROWS_AS(score_prediction_files(pred, truth), DataError);
    }

    SECTION("truth edge outside the universe is a mismatch") {
        test_support::write_file(pred,
                                 "regulator\ttarget\tprobability\tbest_marker\n"
                                 "T1\tT2\t0.9\tL1\n"
                                 "T2\tT1\t0.1\tL1\n");
        const auto missing_truth = dir.file("truth2.tsv");
        test_support::write_file(missing_truth, "source\ttarget\nT1\tT7\n");
        CHECK_THROWS_WITH(score_prediction_files(pred, missing_truth),
                          Catch::Matchers::ContainsSubstring("T7"));
    }
}

TEST_CASE("curve and summary files") {
    test_support::TempDir dir("eval_io");
    const auto s = make_edges({{0.9, 1}, {0.8, 1}, {0.8, 0}, {0.4, 0}});
    const auto roc = roc_curve(s);
    const auto pr = pr_curve(s);
    write_roc_curve(roc, dir.file("roc.tsv"));
    write_pr_curve(pr, dir.file("prc.tsv"));

    const auto roc_text = test_support::read_file(dir.file("roc.tsv"));
    CHECK(roc_text.rfind("threshold\tfpr\ttpr\n", 0) == 0);
    CHECK(roc_text.find("\t0.5\t1\n") != std::string::npos);

    const auto pr_text = test_support::read_file(dir.file("prc.tsv"));
    CHECK(pr_text.rfind("threshold\trecall\tprecision\n", 0) == 0);

    MetricsSummary summary;
    summary.auc_roc = roc.auc;
    summary.auprc = pr.auprc;
    summary.brier = brier_score(s);
    summary.n_pairs = s.size();
    summary.n_positives = s.positives();
    write_metrics_summary(summary, dir.file("summary.tsv"));
    const auto summary_text = test_support::read_file(dir.file("summary.tsv"));
    CHECK(summary_text ==
          "auc_roc\tauprc\tbrier\tn_pairs\tn_positives\tprevalence\n"
          "0.875\t0.833333\t0.2125\t4\t2\t0.5\n");
}
