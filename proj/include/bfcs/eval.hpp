#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bfcs/errors.hpp"
#include "bfcs/scanner.hpp"
#include "bfcs/text.hpp"

namespace bfcs {

// Predicted probability and binary truth per ordered trait pair.
struct ScoredEdges {
    std::vector<double> prob;
    std::vector<int> label;  // 1 = true regulatory relationship

    std::size_t size() const { return prob.size(); }
    std::size_t positives() const {
        std::size_t p = 0;
        for (int l : label) p += static_cast<std::size_t>(l);
        return p;
    }
};

// Pairs a regulation matrix with a set of true (regulator, target) name
// pairs; every ordered distinct pair is scored, self-pairs excluded.
inline ScoredEdges score_edges(const RegulationMatrix& m,
                               const std::set<std::pair<std::string, std::string>>& truth) {
    const std::size_t t_count = m.n_traits();
    for (const auto& [source, target] : truth) {
        const auto find = [&](const std::string& name) {
            return std::find(m.trait_names.begin(), m.trait_names.end(), name) !=
                   m.trait_names.end();
        };
        if (!find(source) || !find(target)) {
            throw DataError("truth edge (" + source + " -> " + target +
                            ") names a trait absent from the predictions");
        }
    }
    ScoredEdges edges;
    edges.prob.reserve(t_count * (t_count - 1));
    edges.label.reserve(t_count * (t_count - 1));
    for (std::size_t i = 0; i < t_count; ++i) {
        for (std::size_t j = 0; j < t_count; ++j) {
            if (i == j) continue;
            edges.prob.push_back(m.prob_at(i, j));
            edges.label.push_back(
                truth.count({m.trait_names[i], m.trait_names[j]}) ? 1 : 0);
        }
    }
    return edges;
}

namespace detail {

// Cumulative true/false positive counts at each distinct threshold,
// descending; tied scores collapse into a single threshold.
struct ThresholdSweep {
    std::vector<double> threshold;
    std::vector<std::size_t> tp, fp;
    std::size_t n_pos = 0, n_neg = 0;
};

inline ThresholdSweep sweep_thresholds(const ScoredEdges& s) {
    std::vector<std::size_t> order(s.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s.prob[a] > s.prob[b];
    });

    ThresholdSweep sweep;
    for (int l : s.label) {
        if (l) ++sweep.n_pos; else ++sweep.n_neg;
    }
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double t = s.prob[order[i]];
        while (i < order.size() && s.prob[order[i]] == t) {
            if (s.label[order[i]]) ++tp; else ++fp;
            ++i;
        }
        sweep.threshold.push_back(t);
        sweep.tp.push_back(tp);
        sweep.fp.push_back(fp);
    }
    return sweep;
}

}  // namespace detail

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // starts at (0, 0), ends at (1, 1)
    double auc = 0.0;
};

// ROC by threshold sweep over the distinct predicted values; area by the
// trapezoidal rule, which credits ties with half the rectangle.
inline RocCurve roc_curve(const ScoredEdges& s) {
    const auto sweep = detail::sweep_thresholds(s);
    if (sweep.n_pos == 0 || sweep.n_neg == 0) {
        throw DataError("ROC requires at least one positive and one negative label");
    }
    RocCurve curve;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    double prev_fpr = 0.0, prev_tpr = 0.0;
    for (std::size_t i = 0; i < sweep.threshold.size(); ++i) {
        const double fpr = static_cast<double>(sweep.fp[i]) / sweep.n_neg;
        const double tpr = static_cast<double>(sweep.tp[i]) / sweep.n_pos;
        curve.points.push_back({sweep.threshold[i], fpr, tpr});
        curve.auc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    return curve;
}

struct PrPoint {
    double threshold = 0.0;
    double recall = 0.0;
    double precision = 0.0;
};

struct PrCurve {
    std::vector<PrPoint> points;
    double auprc = 0.0;
};

// Precision-recall over the same threshold sweep. The area uses the
// step rule over achievable points only:
//   area = sum_k precision_k * (recall_k - recall_{k-1}),
// never linear interpolation between points, which would overstate the
// area between low- and high-recall operating points.
inline PrCurve pr_curve(const ScoredEdges& s) {
    const auto sweep = detail::sweep_thresholds(s);
    if (sweep.n_pos == 0) {
        throw DataError("precision-recall requires at least one positive label");
    }
    PrCurve curve;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < sweep.threshold.size(); ++i) {
        const double recall = static_cast<double>(sweep.tp[i]) / sweep.n_pos;
        const double precision =
            static_cast<double>(sweep.tp[i]) / (sweep.tp[i] + sweep.fp[i]);
        curve.points.push_back({sweep.threshold[i], recall, precision});
        curve.auprc += precision * (recall - prev_recall);
        prev_recall = recall;
    }
    return curve;
}

// Mean squared gap between predicted probability and truth.
inline double brier_score(const ScoredEdges& s) {
    if (s.size() == 0) throw DataError("Brier score requires at least one pair");
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = s.prob[i] - static_cast<double>(s.label[i]);
        total += d * d;
    }
    return total / static_cast<double>(s.size());
}

// ---------------------------------------------------------------------
// Plot-ready TSV output.

inline void write_roc_curve(const RocCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "threshold\tfpr\ttpr\n";
    for (const auto& p : curve.points) {
        out << format_sig(p.threshold, 6) << '\t' << format_sig(p.fpr, 6) << '\t'
            << format_sig(p.tpr, 6) << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

inline void write_pr_curve(const PrCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "threshold\trecall\tprecision\n";
    for (const auto& p : curve.points) {
        out << format_sig(p.threshold, 6) << '\t' << format_sig(p.recall, 6) << '\t'
            << format_sig(p.precision, 6) << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

struct MetricsSummary {
    double auc_roc = 0.0;
    double auprc = 0.0;
    double brier = 0.0;
    std::size_t n_pairs = 0;
    std::size_t n_positives = 0;

    double prevalence() const {
        return n_pairs ? static_cast<double>(n_positives) / n_pairs : 0.0;
    }
};

inline MetricsSummary evaluate(const ScoredEdges& s) {
    MetricsSummary m;
    m.auc_roc = roc_curve(s).auc;
    m.auprc = pr_curve(s).auprc;
    m.brier = brier_score(s);
    m.n_pairs = s.size();
    m.n_positives = s.positives();
    return m;
}

inline void write_metrics_summary(const MetricsSummary& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "auc_roc\tauprc\tbrier\tn_pairs\tn_positives\tprevalence\n";
    out << format_sig(m.auc_roc, 6) << '\t' << format_sig(m.auprc, 6) << '\t'
        << format_sig(m.brier, 6) << '\t' << m.n_pairs << '\t' << m.n_positives << '\t'
        << format_sig(m.prevalence(), 6) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

// ---------------------------------------------------------------------
// File-based scoring for the CLI: predictions in regulation-matrix long
// format, truth as an edge list.

struct PredictedEdge {
    std::string regulator;
    std::string target;
    double prob = 0.0;
};

inline std::vector<PredictedEdge> read_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open predictions file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    std::vector<PredictedEdge> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        const auto fields = split_fields(text, '\t');
        if (fields.size() < 3) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected `regulator target probability [...]`");
        }
        PredictedEdge e;
        e.regulator = std::string(fields[0]);
        e.target = std::string(fields[1]);
        e.prob = parse_double(fields[2], path + ":" + std::to_string(line_no));
        if (!(e.prob >= 0.0 && e.prob <= 1.0)) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": probability must lie in [0, 1]");
        }
        out.push_back(std::move(e));
    }
    return out;
}

// Edge list: header then `source<TAB>target[<TAB>...]` rows.
inline std::set<std::pair<std::string, std::string>> read_edge_list(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    std::set<std::pair<std::string, std::string>> edges;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        const auto fields = split_fields(text, '\t');
        if (fields.size() < 2) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected `source<TAB>target`");
        }
        edges.emplace(std::string(fields[0]), std::string(fields[1]));
    }
    return edges;
}

// Builds ScoredEdges from files. The trait universe is every name seen in
// the predictions; the file must cover every ordered distinct pair of
// that universe exactly once, and every truth edge must fall inside it.
inline ScoredEdges score_prediction_files(const std::string& predictions_path,
                                          const std::string& truth_path) {
    const auto predictions = read_predictions(predictions_path);
    const auto truth = read_edge_list(truth_path);

    std::set<std::string> names;
    for (const auto& e : predictions) {
        names.insert(e.regulator);
        names.insert(e.target);
    }
    std::set<std::pair<std::string, std::string>> seen;
    ScoredEdges edges;
    for (const auto& e : predictions) {
        if (e.regulator == e.target) {
            throw DataError("label mismatch: self-pair (" + e.regulator + " -> " +
                            e.target + ") in predictions");
        }
        if (!seen.insert({e.regulator, e.target}).second) {
            throw DataError("label mismatch: duplicate pair (" + e.regulator + " -> " +
                            e.target + ") in predictions");
        }
    }
    for (const auto& a : names) {
        for (const auto& b : names) {
            if (a != b && !seen.count({a, b})) {
                throw DataError("label mismatch: pair (" + a + " -> " + b +
                                ") missing from predictions");
            }
        }
    }
    for (const auto& [source, target] : truth) {
        if (!names.count(source) || !names.count(target)) {
            throw DataError("label mismatch: truth edge (" + source + " -> " + target +
                            ") names a trait absent from predictions");
        }
    }
    edges.prob.reserve(predictions.size());
    edges.label.reserve(predictions.size());
    for (const auto& e : predictions) {
        edges.prob.push_back(e.prob);
        edges.label.push_back(truth.count({e.regulator, e.target}) ? 1 : 0);
    }
    return edges;
}

}  // namespace bfcs
