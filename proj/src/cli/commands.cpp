#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tenrec/eval.hpp"
#include "tenrec/serialize.hpp"

namespace tenrec::cli {

namespace fs = std::filesystem;

namespace {

fs::path output_dir(const RunConfig& cfg) {
    fs::path dir = cfg.get("output.dir", "out");
    fs::create_directories(dir);
    return dir;
}

// Timestamps live only here so the data outputs stay byte-reproducible.
void sidecar_log(const fs::path& dir, const std::string& line) {
    std::ofstream log(dir / "run.log", std::ios::app);
    const auto now = std::chrono::system_clock::now();
    log << std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()
        << ' ' << line << '\n';
}

Dataset load_dataset(const RunConfig& cfg) {
    const std::string format = cfg.require("dataset.format");
    const std::string path = cfg.require("dataset.path");
    Dataset d;
    if (format == "movielens") {
        d = load_movielens_file(path, parse_scale(cfg.get("dataset.scale", "integer_1_5")));
    } else if (format == "bookcrossing") {
        d = load_bookcrossing_file(path);
    } else if (format == "canonical") {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path);
        d = load_canonical(in, parse_scale(cfg.get("dataset.scale", "integer_1_5")));
    } else {
        throw ConfigError("unknown dataset format: " + format);
    }
    if (cfg.has("dataset.features")) attach_features_file(d, cfg.require("dataset.features"));
    return d;
}

ModelSpec model_spec(const RunConfig& cfg) {
    ModelSpec spec;
    spec.family = cfg.get("model.family", "hybrid_coffee");
    spec.name = spec.family;
    const int r = cfg.get_int("model.rank", 10);
    spec.ranks = {r, r, cfg.get_int("model.rank3", 2)};
    spec.alpha = cfg.get_double("model.alpha", 0.0);
    spec.beta = cfg.get_double("model.beta", 0.5);
    spec.gamma = cfg.get_double("model.gamma", 0.0);
    spec.aggregator = parse_aggregator(cfg.get("model.aggregator", "positive_mass"));
    spec.tol = cfg.get_double("model.tol", 1e-5);
    spec.max_iters = cfg.get_int("model.max_iters", 25);
    spec.seed = cfg.get_u64("model.seed", 0);
    spec.measure = parse_measure(cfg.get("model.similarity_measure", "jaccard"));
    spec.sim_sparsify_threshold = cfg.get_double("model.sim_sparsify_threshold", 0.0);
    spec.binarize_matrix = cfg.get("model.binarize", "false") == "true";
    return spec;
}

EvalConfig eval_config(const RunConfig& cfg) {
    EvalConfig e;
    e.n_folds = cfg.get_int("eval.folds", 5);
    e.holdout_size = cfg.get_int("eval.holdout_size", 10);
    e.mark_fraction = cfg.get_double("eval.mark_fraction", 0.2);
    e.min_remainder = cfg.get_int("eval.min_remainder", 5);
    e.cutoffs = cfg.get_int_list("eval.cutoffs", {1, 5, 10, 20});
    e.seed = cfg.get_u64("eval.seed", 0);
    e.positive_rating = cfg.get_double("eval.positive_rating", 4.0);
    e.emit_roc_curves = cfg.get("eval.roc_curves", "true") == "true";
    return e;
}

nlohmann::json spec_to_json(const ModelSpec& spec) {
    nlohmann::json j;
    j["family"] = spec.family;
    j["rank"] = spec.ranks[0];
    j["rank3"] = spec.ranks[2];
    j["alpha"] = spec.alpha;
    j["beta"] = spec.beta;
    j["gamma"] = spec.gamma;
    return j;
}

}  // namespace

std::string cmd_prepare(const RunConfig& cfg) {
    Dataset d = load_dataset(cfg);
    fs::path dir = output_dir(cfg);
    {
        std::ofstream out(dir / "dataset.tsv");
        save_canonical(d, out);
    }
    {
        nlohmann::json meta;
        meta["users"] = d.user_count();
        meta["items"] = d.item_count();
        meta["interactions"] = d.interactions.size();
        meta["feedback_levels"] = d.feedback_levels();
        meta["rating_scale"] = d.rating_scale;
        for (const auto& [k, v] : d.metadata) meta[k] = v;
        std::ofstream out(dir / "metadata.json");
        out << meta.dump(2) << '\n';
    }
    sidecar_log(dir, "prepare");
    std::ostringstream msg;
    msg << "prepare: " << d.interactions.size() << " interactions, " << d.user_count()
        << " users, " << d.item_count() << " items -> " << (dir / "dataset.tsv").string();
    return msg.str();
}

std::string cmd_train(const RunConfig& cfg) {
    Dataset d = load_dataset(cfg);
    ModelSpec spec = model_spec(cfg);
    fs::path dir = output_dir(cfg);

    SavedModel saved;
    saved.rating_scale = d.rating_scale;
    saved.item_ids = d.item_ids;
    saved.aggregator = spec.aggregator;

    if (spec.family == "coffee" || spec.family == "hybrid_coffee") {
        SparseTensor3 A = to_tensor(d);
        std::optional<Matrix> s0 =
            blended_item_similarity(d, spec.measure, spec.sim_sparsify_threshold);
        SimilarityMatrix sim_i =
            (spec.family == "hybrid_coffee" && spec.beta > 0.0 && s0.has_value())
                ? SimilarityMatrix::assemble(*s0, spec.beta)
                : SimilarityMatrix::identity(d.item_count());
        TrainConfig tc;
        tc.ranks = spec.ranks;
        tc.tol = spec.tol;
        tc.max_iters = spec.max_iters;
        tc.seed = spec.seed;
        saved.tucker = train(A, SimilarityMatrix::identity(d.user_count()), sim_i,
                             SimilarityMatrix::identity(d.feedback_levels()), tc);
        saved.kind = SavedModel::Kind::hybrid_tucker;
        saved.fingerprint = saved.tucker.config_fingerprint;
        std::ofstream trace(dir / "trace.csv");
        trace << "sweep,core_norm\n";
        trace.precision(17);
        for (std::size_t s = 0; s < saved.tucker.trace.size(); ++s) {
            trace << s << ',' << saved.tucker.trace[s] << '\n';
        }
    } else if (spec.family == "pure_svd" || spec.family == "hybrid_svd") {
        Matrix A2 = to_matrix(d);
        if (spec.binarize_matrix) A2 = (A2.array() != 0.0).cast<double>();
        std::optional<Matrix> s0 =
            blended_item_similarity(d, spec.measure, spec.sim_sparsify_threshold);
        SimilarityMatrix sim_i = (spec.family == "hybrid_svd" && spec.beta > 0.0 && s0)
                                     ? SimilarityMatrix::assemble(*s0, spec.beta)
                                     : SimilarityMatrix::identity(d.item_count());
        saved.matrix = spec.family == "pure_svd"
                           ? train_pure_svd(A2, spec.ranks[0])
                           : train_hybrid_svd(A2, SimilarityMatrix::identity(d.user_count()),
                                              sim_i, spec.ranks[0]);
        saved.kind = spec.family == "pure_svd" ? SavedModel::Kind::pure_svd
                                               : SavedModel::Kind::hybrid_svd;
    } else if (spec.family == "most_popular") {
        std::vector<std::pair<int, int>> pairs;
        for (const auto& x : d.interactions) pairs.emplace_back(x.user, x.item);
        saved.popularity = most_popular(pairs, d.item_count());
        saved.kind = SavedModel::Kind::popularity;
    } else {
        throw ConfigError("family '" + spec.family + "' is not trainable to a model file");
    }
    save_model_file(saved, (dir / "model.hcf1").string());
    sidecar_log(dir, "train " + spec.family);
    return "train: " + spec.family + " -> " + (dir / "model.hcf1").string();
}

std::string cmd_tune(const RunConfig& cfg) {
    Dataset d = load_dataset(cfg);
    ModelSpec spec = model_spec(cfg);
    TuneGrids grids;
    grids.ranks = cfg.get_int_list("tune.ranks", {10, 20, 40});
    grids.rank3s = cfg.get_int_list("tune.rank3s", {2, 3, 4});
    grids.weights = cfg.get_double_list("tune.weights", {0.1, 0.5, 0.9});
    TuneResult result = tune(d, spec, grids, eval_config(cfg));
    fs::path dir = output_dir(cfg);
    nlohmann::json j;
    j["best"] = spec_to_json(result.best);
    j["best_ndcg10"] = result.best_ndcg;
    j["train_calls_rank_stage"] = result.train_calls_rank_stage;
    j["train_calls_weight_stage"] = result.train_calls_weight_stage;
    for (const auto& [label, score] : result.table) {
        j["table"].push_back({{"config", label}, {"ndcg10", score}});
    }
    std::ofstream out(dir / "best_config.json");
    out << j.dump(2) << '\n';
    sidecar_log(dir, "tune " + spec.family);
    std::ostringstream msg;
    msg << "tune: best rank=" << result.best.ranks[0] << " rank3=" << result.best.ranks[2]
        << " beta=" << result.best.beta << " ndcg10=" << result.best_ndcg;
    return msg.str();
}

std::string cmd_evaluate(const RunConfig& cfg) {
    Dataset d = load_dataset(cfg);
    EvalConfig ec = eval_config(cfg);
    std::vector<ModelSpec> specs;
    std::istringstream families(cfg.get("eval.models", cfg.get("model.family", "hybrid_coffee")));
    std::string family;
    while (std::getline(families, family, ',')) {
        if (family.empty()) continue;
        ModelSpec spec = model_spec(cfg);
        spec.family = family;
        spec.name = family;
        specs.push_back(spec);
    }
    SplitPlan split =
        make_split(d, ec.n_folds, ec.holdout_size, ec.mark_fraction, ec.min_remainder, ec.seed);
    auto reports = run_experiment(d, specs, split, ec);
    fs::path dir = output_dir(cfg);
    {
        std::ofstream out(dir / "report.csv");
        write_reports_csv(reports, out);
    }
    {
        std::ofstream out(dir / "report.json");
        write_reports_json(reports, out);
    }
    {
        std::ofstream out(dir / "roc.csv");
        write_roc_csv(reports, out);
    }
    sidecar_log(dir, "evaluate");
    return "evaluate: " + std::to_string(specs.size()) + " model(s), " +
           std::to_string(ec.n_folds) + " folds -> " + (dir / "report.csv").string();
}

std::string cmd_recommend(const RunConfig& cfg) {
    fs::path dir = output_dir(cfg);
    const std::string model_path = cfg.get("model.file", (dir / "model.hcf1").string());
    SavedModel saved = load_model_file(model_path);
    const std::string history_path = cfg.require("recommend.history");
    std::ifstream in(history_path);
    if (!in) throw IoError("cannot open history " + history_path);

    // History lines: item_id<TAB>rating.
    std::map<std::string, int> item_index;
    for (std::size_t k = 0; k < saved.item_ids.size(); ++k) {
        item_index[saved.item_ids[k]] = static_cast<int>(k);
    }
    std::vector<std::pair<int, double>> history;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string id;
        double rating;
        if (!std::getline(ls, id, '\t') || !(ls >> rating)) {
            throw ParseError("history line " + std::to_string(lineno) + ": expected id\trating");
        }
        auto it = item_index.find(id);
        if (it == item_index.end()) continue;  // unseen item, nothing to project
        history.emplace_back(it->second, rating);
    }
    if (history.empty()) throw EmptyHistory("no usable interactions in " + history_path);

    const int n = cfg.get_int("recommend.top_n", 10);
    const int N = static_cast<int>(saved.item_ids.size());
    std::set<int> exclude;
    for (const auto& [item, rating] : history) exclude.insert(item);

    std::vector<std::pair<int, double>> top;
    switch (saved.kind) {
        case SavedModel::Kind::hybrid_tucker: {
            PreferenceMatrix P;
            P.items = N;
            P.levels = static_cast<int>(saved.rating_scale.size());
            for (const auto& [item, rating] : history) {
                P.cells.push_back({item, rating_to_index(rating, saved.rating_scale), 1.0});
            }
            Matrix pred = fold_in_user(saved.tucker, P);
            const int positive_idx = static_cast<int>(
                std::lower_bound(saved.rating_scale.begin(), saved.rating_scale.end(), 4.0 - 1e-9) -
                saved.rating_scale.begin());
            top = score_items(pred, saved.aggregator, positive_idx, exclude, n,
                              saved.rating_scale);
            break;
        }
        case SavedModel::Kind::pure_svd:
        case SavedModel::Kind::hybrid_svd: {
            Vector p = Vector::Zero(N);
            for (const auto& [item, rating] : history) p[item] = rating;
            Vector scores = fold_in_matrix(saved.matrix, p);
            std::vector<std::pair<int, double>> all;
            for (int i = 0; i < N; ++i) {
                if (!exclude.count(i)) all.emplace_back(i, scores[i]);
            }
            std::stable_sort(all.begin(), all.end(),
                             [](const auto& a, const auto& b) { return a.second > b.second; });
            if (static_cast<int>(all.size()) > n) all.resize(n);
            top = std::move(all);
            break;
        }
        case SavedModel::Kind::popularity: {
            for (int item : popularity_ranking(saved.popularity)) {
                if (exclude.count(item)) continue;
                top.emplace_back(item, static_cast<double>(saved.popularity.counts[item]));
                if (static_cast<int>(top.size()) == n) break;
            }
            break;
        }
    }

    std::ofstream out(dir / "recommendations.tsv");
    out.precision(17);
    std::ostringstream msg;
    for (const auto& [item, score] : top) {
        out << saved.item_ids[item] << '\t' << score << '\n';
    }
    sidecar_log(dir, "recommend");
    msg << "recommend: " << top.size() << " item(s) -> " << (dir / "recommendations.tsv").string();
    return msg.str();
}

}  // namespace tenrec::cli
