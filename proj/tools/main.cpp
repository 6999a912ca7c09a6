// bfcs: score conditional-independence models over variable triplets and
// scan (marker, trait, trait) triplets for regulatory relationships.
//
// Subcommands: triplet, scan, simulate {consistency, grn}, eval.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bfcs/bfcs.hpp"
#include "bfcs/manifest.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

constexpr double kLn10 = 2.302585092994045684;

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    for (const auto field : bfcs::split_fields(text, ',')) {
        if (!field.empty()) out.emplace_back(field);
    }
    return out;
}

// Prior spec: a family name or `custom:<path>`.
bfcs::StructurePrior resolve_prior(const std::string& spec) {
    if (spec.rfind("custom:", 0) == 0) {
        return bfcs::prior_from_file(spec.substr(7));
    }
    if (auto prior = bfcs::prior_from_name(spec)) return *prior;
    throw bfcs::ConfigError(
        "unknown prior '" + spec +
        "' (expected dag, dag-bk, dmag, dmag-bk, uniform-models, or custom:<path>)");
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    const std::uint64_t seed = fresh_seed();
    std::cerr << "seed: " << seed << " (generated; pass --seed to reproduce)\n";
    return seed;
}

// Marker preselection file: header `trait<TAB>marker`, one candidate
// marker per row; traits may appear multiple times.
bfcs::ScanFilter load_marker_map(const std::string& path,
                                 const bfcs::CorrelationStore& store) {
    std::ifstream in(path);
    if (!in) throw bfcs::DataError("cannot open marker map: " + path);
    std::string line;
    if (!std::getline(in, line)) throw bfcs::DataError(path + ": empty file");

    const auto index_in = [&](const std::vector<std::string>& names,
                              const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return i;
        }
        return std::nullopt;
    };

    std::vector<std::vector<std::size_t>> map(store.n_traits());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = bfcs::strip_cr(line);
        if (text.empty()) continue;
        const auto fields = bfcs::split_fields(text, '\t');
        if (fields.size() != 2) {
            throw bfcs::DataError(path + ":" + std::to_string(line_no) +
                                  ": expected `trait<TAB>marker`");
        }
        const auto trait = index_in(store.trait_names, std::string(fields[0]));
        if (!trait) {
            throw bfcs::DataError(path + ":" + std::to_string(line_no) +
                                  ": unknown trait '" + std::string(fields[0]) + "'");
        }
        const auto marker = index_in(store.marker_names, std::string(fields[1]));
        if (!marker) {
            throw bfcs::DataError(path + ":" + std::to_string(line_no) +
                                  ": unknown marker '" + std::string(fields[1]) + "'");
        }
        map[*trait].push_back(*marker);
    }
    return bfcs::ScanFilter::marker_map(std::move(map));
}

void print_scan_summary(const bfcs::ScanSummary& s) {
    std::cerr << "scan: " << s.pairs << " ordered trait pairs, " << s.triplets_scored
              << " triplets scored, " << s.triplets_skipped_singular
              << " skipped as singular, " << s.pairs_without_support
              << " pairs without support, " << bfcs::format_sig(s.wall_seconds, 3)
              << " s\n";
}

// ---------------------------------------------------------------------

struct TripletArgs {
    double r12 = 0.0, r13 = 0.0, r23 = 0.0;
    std::int64_t n = 0;
    std::string data_path;
    std::string prior = "dmag-bk";
    int nu = 4;
    bool no_center = false;
    std::string out;
};

int run_triplet(const TripletArgs& args, bool explicit_r) {
    bfcs::AnalysisConfig cfg;
    cfg.nu = args.nu;
    cfg.center_data = !args.no_center;

    bfcs::CorrelationTriplet t;
    if (!args.data_path.empty() && explicit_r) {
        throw bfcs::ConfigError("pass either --data or explicit correlations, not both");
    }
    if (!args.data_path.empty()) {
        const auto table = bfcs::read_numeric_table(args.data_path);
        if (table.columns.size() != 3) {
            throw bfcs::DataError(args.data_path + ": triplet data needs exactly 3 columns, got " +
                                  std::to_string(table.columns.size()));
        }
        t = bfcs::correlation_triplet(table.columns[0], table.columns[1],
                                      table.columns[2], cfg.center_data);
    } else if (explicit_r) {
        if (args.n < 1) throw bfcs::ConfigError("--n must be >= 1");
        t = {args.r12, args.r13, args.r23, args.n};
    } else {
        throw bfcs::ConfigError("triplet needs either --data or --r12/--r13/--r23/--n");
    }

    const bfcs::StructurePrior prior = resolve_prior(args.prior);
    const auto bf = bfcs::log_bayes_factors(t, cfg);
    const auto post = bfcs::posterior(bf, prior);

    std::ostringstream report;
    report << "r12=" << bfcs::format_sig(t.r12, 6) << " r13=" << bfcs::format_sig(t.r13, 6)
           << " r23=" << bfcs::format_sig(t.r23, 6) << " n=" << t.n << " nu=" << cfg.nu
           << " prior=" << args.prior << "\n";
    report << "model\tpattern\tstatement\tlog10_bf\tprior\tposterior\n";
    for (const auto m : bfcs::kAllModels) {
        report << bfcs::model_id(m) << '\t' << bfcs::pattern_name(bfcs::pattern_of(m))
               << '\t' << bfcs::model_statement(m) << '\t'
               << bfcs::format_sig(bf[m] / kLn10, 6) << '\t'
               << bfcs::format_sig(prior[m], 6) << '\t' << bfcs::format_sig(post[m], 6)
               << '\n';
    }
    report << "causal_chain_probability\t" << bfcs::format_sig(
        bfcs::causal_chain_probability(post), 6) << '\n';

    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw bfcs::DataError("cannot write file: " + args.out);
        out << report.str();

        bfcs::RunManifest manifest;
        manifest.subcommand = "triplet";
        if (!args.data_path.empty()) {
            manifest.set("data", args.data_path);
            manifest.inputs.push_back(args.data_path);
        } else {
            manifest.set("r12", bfcs::format_exact(t.r12));
            manifest.set("r13", bfcs::format_exact(t.r13));
            manifest.set("r23", bfcs::format_exact(t.r23));
            manifest.set("n", static_cast<long long>(t.n));
        }
        manifest.set("prior", args.prior);
        manifest.set("nu", args.nu);
        manifest.set("center", cfg.center_data ? "true" : "false");
        manifest.outputs.push_back(args.out);
        bfcs::write_manifest(manifest, args.out + ".manifest.json");
    }
    std::cout << report.str();
    return 0;
}

// ---------------------------------------------------------------------

struct ScanArgs {
    std::string expression, genotype, out = "regulation.tsv";
    std::string prior = "dmag-bk";
    std::string marker_map_path;
    int nu = 4;
    int top_k = 0;
    int threads = 0;
    bool no_center = false;
};

int run_scan(const ScanArgs& args) {
    bfcs::AnalysisConfig cfg;
    cfg.nu = args.nu;
    cfg.center_data = !args.no_center;
    if (args.top_k < 0) {
        throw bfcs::ConfigError("--top-k-markers must be positive");
    }
    if (args.top_k > 0 && !args.marker_map_path.empty()) {
        throw bfcs::ConfigError("--top-k-markers and --marker-map are mutually exclusive");
    }

    const bfcs::StructurePrior prior = resolve_prior(args.prior);
    const bfcs::Dataset dataset = bfcs::load_dataset(args.expression, args.genotype);
    const int threads = bfcs::resolve_thread_count(args.threads);
    const auto store = bfcs::compute_correlations(dataset, cfg, threads);

    bfcs::ScanFilter filter;
    if (args.top_k > 0) {
        filter = bfcs::ScanFilter::top_k_markers(args.top_k);
    } else if (!args.marker_map_path.empty()) {
        filter = load_marker_map(args.marker_map_path, store);
    }

    const auto result = bfcs::scan(store, prior, cfg, filter, threads);
    bfcs::write_regulation_matrix(result.matrix, args.out);
    print_scan_summary(result.summary);

    bfcs::RunManifest manifest;
    manifest.subcommand = "scan";
    manifest.set("expression", args.expression);
    manifest.set("genotype", args.genotype);
    manifest.set("prior", args.prior);
    manifest.set("nu", args.nu);
    manifest.set("center", cfg.center_data ? "true" : "false");
    manifest.set("top-k-markers", args.top_k);
    if (!args.marker_map_path.empty()) {
        manifest.set("marker-map", args.marker_map_path);
        manifest.inputs.push_back(args.marker_map_path);
    }
    manifest.set("threads", args.threads);
    manifest.inputs.push_back(args.expression);
    manifest.inputs.push_back(args.genotype);
    manifest.outputs.push_back(args.out);
    bfcs::write_manifest(manifest, args.out + ".manifest.json");
    return 0;
}

// ---------------------------------------------------------------------

struct ConsistencyArgs {
    std::string models = "chain,independent,full";
    std::string sizes = "100,1000,10000";
    int reps = 200;
    std::string x1 = "gaussian";
    std::string prior = "dmag-bk";
    int nu = 4;
    int threads = 0;
    std::optional<std::uint64_t> seed;
    std::string out = "consistency.tsv";
};

int run_simulate_consistency(const ConsistencyArgs& args) {
    std::vector<bfcs::TripletModel> models;
    for (const auto& name : split_csv(args.models)) {
        const auto model = bfcs::triplet_model_from_name(name);
        if (!model) {
            throw bfcs::ConfigError("unknown model '" + name +
                                    "' (expected chain, independent, full)");
        }
        models.push_back(*model);
    }
    std::vector<std::size_t> sizes;
    for (const auto& text : split_csv(args.sizes)) {
        sizes.push_back(static_cast<std::size_t>(bfcs::parse_int(text, "--sizes")));
    }
    bfcs::X1Kind x1_kind;
    if (args.x1 == "gaussian") {
        x1_kind = bfcs::X1Kind::Gaussian;
    } else if (args.x1 == "bernoulli") {
        x1_kind = bfcs::X1Kind::Bernoulli;
    } else {
        throw bfcs::ConfigError("unknown --x1 '" + args.x1 +
                                "' (expected gaussian or bernoulli)");
    }

    bfcs::AnalysisConfig cfg;
    cfg.nu = args.nu;
    const bfcs::StructurePrior prior = resolve_prior(args.prior);
    const std::uint64_t seed = resolve_seed(args.seed);

    const auto rows = bfcs::run_consistency_experiment(
        models, x1_kind, sizes, args.reps, prior, cfg, seed,
        bfcs::resolve_thread_count(args.threads));
    bfcs::write_consistency_table(rows, args.out);

    bfcs::RunManifest manifest;
    manifest.subcommand = "simulate consistency";
    manifest.set("models", args.models);
    manifest.set("sizes", args.sizes);
    manifest.set("reps", args.reps);
    manifest.set("x1", args.x1);
    manifest.set("prior", args.prior);
    manifest.set("nu", args.nu);
    manifest.set("threads", args.threads);
    manifest.set_seed(seed);
    manifest.outputs.push_back(args.out);
    bfcs::write_manifest(manifest, args.out + ".manifest.json");
    return 0;
}

// ---------------------------------------------------------------------

struct GrnArgs {
    std::size_t genes = 100;
    std::size_t edges = 51;
    std::size_t samples = 100;
    std::optional<std::uint64_t> seed;
    std::string out_prefix = "grn";
};

int run_simulate_grn(const GrnArgs& args) {
    const std::uint64_t seed = resolve_seed(args.seed);
    bfcs::Rng rng = bfcs::derive_rng(seed, 0);
    const auto spec = bfcs::generate_grn(args.genes, args.edges, rng);
    bfcs::Rng data_rng = bfcs::derive_rng(seed, 1);
    const auto sample = bfcs::sample_grn_data_with_noise(spec, args.samples, data_rng);

    const std::string expression_path = args.out_prefix + "_expression.tsv";
    const std::string genotype_path = args.out_prefix + "_genotype.tsv";
    const std::string edges_path = args.out_prefix + "_edges.tsv";
    const std::string marker_p_path = args.out_prefix + "_marker_p.tsv";
    bfcs::write_dataset_columns(sample.data, bfcs::ColumnRole::Trait, expression_path);
    bfcs::write_dataset_columns(sample.data, bfcs::ColumnRole::Marker, genotype_path);
    bfcs::write_grn_edges(spec, edges_path);
    bfcs::write_marker_probabilities(spec, marker_p_path);

    bfcs::RunManifest manifest;
    manifest.subcommand = "simulate grn";
    manifest.set("genes", static_cast<long long>(args.genes));
    manifest.set("edges", static_cast<long long>(args.edges));
    manifest.set("samples", static_cast<long long>(args.samples));
    manifest.set_seed(seed);
    manifest.outputs = {expression_path, genotype_path, edges_path, marker_p_path};
    bfcs::write_manifest(manifest, args.out_prefix + ".manifest.json");

    std::cerr << "grn: " << args.genes << " genes, " << spec.edges.size()
              << " edges, " << args.samples << " samples -> " << args.out_prefix
              << "_*.tsv\n";
    return 0;
}

// ---------------------------------------------------------------------

struct EvalArgs {
    std::string predictions, truth, out_prefix = "eval";
};

int run_eval(const EvalArgs& args) {
    const auto edges = bfcs::score_prediction_files(args.predictions, args.truth);
    const auto roc = bfcs::roc_curve(edges);
    const auto pr = bfcs::pr_curve(edges);
    bfcs::MetricsSummary summary;
    summary.auc_roc = roc.auc;
    summary.auprc = pr.auprc;
    summary.brier = bfcs::brier_score(edges);
    summary.n_pairs = edges.size();
    summary.n_positives = edges.positives();

    const std::string roc_path = args.out_prefix + "_roc.tsv";
    const std::string pr_path = args.out_prefix + "_prc.tsv";
    const std::string summary_path = args.out_prefix + "_summary.tsv";
    bfcs::write_roc_curve(roc, roc_path);
    bfcs::write_pr_curve(pr, pr_path);
    bfcs::write_metrics_summary(summary, summary_path);

    std::cout << "auc_roc=" << bfcs::format_sig(summary.auc_roc, 6)
              << " auprc=" << bfcs::format_sig(summary.auprc, 6)
              << " brier=" << bfcs::format_sig(summary.brier, 6) << '\n';

    bfcs::RunManifest manifest;
    manifest.subcommand = "eval";
    manifest.set("predictions", args.predictions);
    manifest.set("truth", args.truth);
    manifest.inputs = {args.predictions, args.truth};
    manifest.outputs = {roc_path, pr_path, summary_path};
    bfcs::write_manifest(manifest, args.out_prefix + ".manifest.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayes factors of covariance structures over variable triplets"};
    app.set_version_flag("--version", std::string("bfcs ") + bfcs::kVersion);
    app.require_subcommand(1);

    TripletArgs triplet_args;
    auto* triplet = app.add_subcommand(
        "triplet", "Score one correlation triplet and report the model posterior");
    auto* r12_opt = triplet->add_option("--r12", triplet_args.r12, "Correlation of X1 and X2");
    triplet->add_option("--r13", triplet_args.r13, "Correlation of X1 and X3");
    triplet->add_option("--r23", triplet_args.r23, "Correlation of X2 and X3");
    triplet->add_option("--n", triplet_args.n, "Sample count behind the correlations");
    triplet->add_option("--data", triplet_args.data_path,
                        "3-column TSV/CSV; correlations are computed from it");
    triplet->add_option("--prior", triplet_args.prior,
                        "dag, dag-bk, dmag, dmag-bk, uniform-models, custom:<path>");
    triplet->add_option("--nu", triplet_args.nu, "Degrees of freedom (>= 3)");
    triplet->add_flag("--no-center", triplet_args.no_center,
                      "Correlate raw columns without removing means");
    triplet->add_option("--out", triplet_args.out, "Also write the report to a file");

    ScanArgs scan_args;
    auto* scan = app.add_subcommand(
        "scan", "Scan all (marker, trait, trait) triplets for regulatory chains");
    scan->add_option("--expression", scan_args.expression, "Expression (trait) table")
        ->required();
    scan->add_option("--genotype", scan_args.genotype, "Genotype (marker) table")
        ->required();
    scan->add_option("--out", scan_args.out, "Output regulation table");
    scan->add_option("--prior", scan_args.prior, "Structure prior (default dmag-bk)");
    scan->add_option("--nu", scan_args.nu, "Degrees of freedom (>= 3)");
    scan->add_option("--top-k-markers", scan_args.top_k,
                     "Only scan the K markers most correlated with each regulator");
    scan->add_option("--marker-map", scan_args.marker_map_path,
                     "Explicit trait->marker candidate file");
    scan->add_option("--threads", scan_args.threads, "Worker threads (0 = auto)");
    scan->add_flag("--no-center", scan_args.no_center,
                   "Correlate raw columns without removing means");

    auto* simulate = app.add_subcommand("simulate", "Generate synthetic data");
    simulate->require_subcommand(1);

    ConsistencyArgs consistency_args;
    auto* consistency = simulate->add_subcommand(
        "consistency", "Chain-posterior convergence experiment over triplet models");
    consistency->add_option("--models", consistency_args.models,
                            "Comma list of chain, independent, full");
    consistency->add_option("--sizes", consistency_args.sizes, "Comma list of sample sizes");
    consistency->add_option("--reps", consistency_args.reps, "Parameter configurations per model");
    consistency->add_option("--x1", consistency_args.x1, "gaussian or bernoulli");
    consistency->add_option("--prior", consistency_args.prior, "Structure prior");
    consistency->add_option("--nu", consistency_args.nu, "Degrees of freedom (>= 3)");
    consistency->add_option("--threads", consistency_args.threads, "Worker threads (0 = auto)");
    consistency->add_option("--seed", consistency_args.seed, "RNG seed (generated if absent)");
    consistency->add_option("--out", consistency_args.out, "Output table");

    GrnArgs grn_args;
    auto* grn = simulate->add_subcommand(
        "grn", "Synthetic regulatory network with per-gene markers");
    grn->add_option("--genes", grn_args.genes, "Gene count");
    grn->add_option("--edges", grn_args.edges, "Regulatory edge count");
    grn->add_option("--samples", grn_args.samples, "Sample count");
    grn->add_option("--seed", grn_args.seed, "RNG seed (generated if absent)");
    grn->add_option("--out-prefix", grn_args.out_prefix, "Prefix for output files");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand(
        "eval", "Score predictions against a ground-truth edge list");
    eval->add_option("--predictions", eval_args.predictions,
                     "Regulation table (scan output)")
        ->required();
    eval->add_option("--truth", eval_args.truth, "Ground-truth edge list")->required();
    eval->add_option("--out-prefix", eval_args.out_prefix, "Prefix for output files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (triplet->parsed()) return run_triplet(triplet_args, r12_opt->count() > 0);
        if (scan->parsed()) return run_scan(scan_args);
        if (simulate->parsed()) {
            if (consistency->parsed()) return run_simulate_consistency(consistency_args);
            if (grn->parsed()) return run_simulate_grn(grn_args);
        }
        if (eval->parsed()) return run_eval(eval_args);
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const bfcs::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const bfcs::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const bfcs::NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
