#include "tenrec/eval.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"

namespace tenrec {

namespace {

double log2_discount(int position) { return 1.0 / std::log2(position + 1.0); }

// Ideal discounted sum for k relevant items in the top n.
double ideal_dcg(int k, int n) {
    double s = 0.0;
    for (int p = 1; p <= std::min(k, n); ++p) s += log2_discount(p);
    return s;
}

}  // namespace

SplitPlan make_split(const Dataset& d, int n_folds, int holdout_size, double mark_fraction,
                     int min_remainder, std::uint64_t seed) {
    if (n_folds < 1 || holdout_size < 1 || mark_fraction <= 0.0) {
        throw ConfigError("make_split: invalid fold/holdout/fraction settings");
    }
    std::vector<int> counts(d.user_count(), 0);
    for (const auto& x : d.interactions) ++counts[x.user];
    std::vector<int> eligible;
    for (int u = 0; u < d.user_count(); ++u) {
        if (counts[u] >= holdout_size + min_remainder) eligible.push_back(u);
    }
    const int E = static_cast<int>(eligible.size());
    if (E < n_folds) {
        throw NotEnoughEligibleUsers("only " + std::to_string(E) + " eligible users for " +
                                     std::to_string(n_folds) + " folds");
    }
    std::mt19937_64 rng(seed);
    std::shuffle(eligible.begin(), eligible.end(), rng);

    SplitPlan plan;
    plan.n_folds = n_folds;
    plan.fold_of_user.assign(d.user_count(), -1);
    const bool partition = std::abs(mark_fraction * n_folds - 1.0) < 1e-9;
    int pos = 0;
    for (int f = 0; f < n_folds; ++f) {
        int take;
        if (partition) {
            take = E / n_folds + (f < E % n_folds ? 1 : 0);
        } else {
            take = std::max(1, static_cast<int>(std::lround(mark_fraction * E)));
            if (pos + take > E) {
                throw NotEnoughEligibleUsers("eligible pool exhausted at fold " +
                                             std::to_string(f));
            }
        }
        for (int k = 0; k < take; ++k) plan.fold_of_user[eligible[pos++]] = f;
    }

    // Per-user interaction indices, then a uniform holdout sample per marked user.
    std::vector<std::vector<std::size_t>> by_user(d.user_count());
    for (std::size_t idx = 0; idx < d.interactions.size(); ++idx) {
        by_user[d.interactions[idx].user].push_back(idx);
    }
    for (int u = 0; u < d.user_count(); ++u) {
        if (plan.fold_of_user[u] < 0) continue;
        std::mt19937_64 user_rng(seed ^ (0x9e3779b97f4a7c15ULL * (u + 1)));
        std::vector<std::size_t> own = by_user[u];
        std::shuffle(own.begin(), own.end(), user_rng);
        own.resize(holdout_size);
        std::sort(own.begin(), own.end());
        plan.holdout[u] = std::move(own);
    }
    return plan;
}

double ndcg_at_n(const std::vector<int>& ranked, const std::set<int>& holdout_positive, int n) {
    if (holdout_positive.empty()) return 0.0;
    double dcg = 0.0;
    const int depth = std::min<int>(n, static_cast<int>(ranked.size()));
    for (int p = 1; p <= depth; ++p) {
        if (holdout_positive.count(ranked[p - 1])) dcg += log2_discount(p);
    }
    return dcg / ideal_dcg(static_cast<int>(holdout_positive.size()), n);
}

double ndcl_at_n(const std::vector<int>& ranked, const std::set<int>& holdout_negative, int n) {
    if (holdout_negative.empty()) return 0.0;
    double dcl = 0.0;
    const int depth = std::min<int>(n, static_cast<int>(ranked.size()));
    for (int p = 1; p <= depth; ++p) {
        if (holdout_negative.count(ranked[p - 1])) dcl += log2_discount(p);
    }
    return dcl / ideal_dcg(static_cast<int>(holdout_negative.size()), n);
}

std::vector<std::pair<double, double>> roc_points(const std::vector<int>& ranked,
                                                  const std::set<int>& holdout_positive,
                                                  const std::set<int>& holdout_negative) {
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(0.0, 0.0);
    if (holdout_positive.empty() || holdout_negative.empty()) {
        pts.emplace_back(1.0, 1.0);
        return pts;
    }
    const double np = static_cast<double>(holdout_positive.size());
    const double nn = static_cast<double>(holdout_negative.size());
    int tp = 0, fp = 0;
    for (int item : ranked) {
        if (holdout_positive.count(item)) {
            ++tp;
        } else if (holdout_negative.count(item)) {
            ++fp;
        } else {
            continue;  // unrated items advance neither counter
        }
        pts.emplace_back(fp / nn, tp / np);
    }
    if (pts.back() != std::make_pair(1.0, 1.0)) pts.emplace_back(1.0, 1.0);
    return pts;
}

double roc_auc(const std::vector<std::pair<double, double>>& points) {
    double auc = 0.0;
    for (std::size_t k = 1; k < points.size(); ++k) {
        auc += (points[k].first - points[k - 1].first) *
               (points[k].second + points[k - 1].second) * 0.5;
    }
    return auc;
}

std::pair<double, double> paired_ci(const std::vector<double>& values) {
    const std::size_t k = values.size();
    if (k < 2) throw DegenerateSample("paired_ci needs at least 2 folds");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double s = std::sqrt(ss / (k - 1));
    if (s == 0.0) return {mean, 0.0};
    boost::math::students_t dist(static_cast<double>(k - 1));
    const double t = boost::math::quantile(dist, 0.975);
    return {mean, t * s / std::sqrt(static_cast<double>(k))};
}

std::optional<Matrix> blended_item_similarity(const Dataset& d, SimilarityMeasure measure,
                                              double sparsify_threshold) {
    if (d.item_features.empty()) return std::nullopt;
    std::vector<Matrix> fields;
    for (const auto& name : d.item_features.field_names()) {
        fields.push_back(field_similarity(d.item_features, name, measure));
    }
    return sparsify(blend_fields(fields), sparsify_threshold);
}

namespace {

std::vector<int> order_by_score(const Vector& scores, const std::set<int>& exclude) {
    std::vector<int> order;
    order.reserve(scores.size());
    for (int i = 0; i < scores.size(); ++i) {
        if (!exclude.count(i)) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    return order;
}

class TensorRecommender : public Recommender {
public:
    TensorRecommender(HybridTuckerModel model, std::vector<double> scale, Aggregator agg,
                      int positive_idx)
        : model_(std::move(model)), scale_(std::move(scale)), agg_(agg),
          positive_idx_(positive_idx) {}

    std::vector<int> rank(const std::vector<Interaction>& history,
                          const std::set<int>& exclude) const override {
        PreferenceMatrix P;
        P.items = static_cast<int>(model_.V.rows());
        P.levels = static_cast<int>(model_.W.rows());
        for (const auto& x : history) {
            P.cells.push_back({x.item, rating_to_index(x.rating, scale_), 1.0});
        }
        Matrix pred = fold_in_user(model_, P);
        auto top = score_items(pred, agg_, positive_idx_, exclude, P.items, scale_);
        std::vector<int> order;
        order.reserve(top.size());
        for (const auto& [item, score] : top) order.push_back(item);
        return order;
    }

    const HybridTuckerModel& model() const { return model_; }

private:
    HybridTuckerModel model_;
    std::vector<double> scale_;
    Aggregator agg_;
    int positive_idx_;
};

class MatrixRecommender : public Recommender {
public:
    MatrixRecommender(MatrixModel model, bool binarize) : model_(std::move(model)), binarize_(binarize) {}

    std::vector<int> rank(const std::vector<Interaction>& history,
                          const std::set<int>& exclude) const override {
        Vector p = Vector::Zero(model_.V.rows());
        for (const auto& x : history) p[x.item] = binarize_ ? 1.0 : x.rating;
        return order_by_score(fold_in_matrix(model_, p), exclude);
    }

private:
    MatrixModel model_;
    bool binarize_;
};

class PopularityRecommender : public Recommender {
public:
    explicit PopularityRecommender(PopularityModel model) : ranking_(popularity_ranking(model)) {}

    std::vector<int> rank(const std::vector<Interaction>&,
                          const std::set<int>& exclude) const override {
        std::vector<int> out;
        out.reserve(ranking_.size());
        for (int item : ranking_) {
            if (!exclude.count(item)) out.push_back(item);
        }
        return out;
    }

private:
    std::vector<int> ranking_;
};

class ContentRecommender : public Recommender {
public:
    ContentRecommender(Matrix s0) : s0_(std::move(s0)) {}

    std::vector<int> rank(const std::vector<Interaction>& history,
                          const std::set<int>& exclude) const override {
        std::set<int> hist;
        for (const auto& x : history) hist.insert(x.item);
        return order_by_score(content_based_scores(s0_, hist), exclude);
    }

private:
    Matrix s0_;
};

SimilarityMatrix item_similarity_for(const ModelSpec& spec, const std::optional<Matrix>& item_s0,
                                     int item_count) {
    if (spec.beta > 0.0 && item_s0.has_value()) {
        return SimilarityMatrix::assemble(*item_s0, spec.beta);
    }
    return SimilarityMatrix::identity(item_count);
}

}  // namespace

std::unique_ptr<Recommender> fit_model(const ModelSpec& spec, const Dataset& train,
                                       const std::optional<Matrix>& item_s0,
                                       int positive_threshold_index) {
    if (spec.family == "coffee" || spec.family == "hybrid_coffee") {
        SparseTensor3 A = to_tensor(train);
        SimilarityMatrix sim_u = SimilarityMatrix::identity(train.user_count());
        SimilarityMatrix sim_i = spec.family == "coffee"
                                     ? SimilarityMatrix::identity(train.item_count())
                                     : item_similarity_for(spec, item_s0, train.item_count());
        SimilarityMatrix sim_f = SimilarityMatrix::identity(train.feedback_levels());
        TrainConfig cfg;
        cfg.ranks = spec.ranks;
        cfg.tol = spec.tol;
        cfg.max_iters = spec.max_iters;
        cfg.seed = spec.seed;
        HybridTuckerModel model = tenrec::train(A, sim_u, sim_i, sim_f, cfg);
        return std::make_unique<TensorRecommender>(std::move(model), train.rating_scale,
                                                   spec.aggregator, positive_threshold_index);
    }
    if (spec.family == "pure_svd" || spec.family == "hybrid_svd") {
        Matrix A2 = to_matrix(train);
        if (spec.binarize_matrix) A2 = (A2.array() != 0.0).cast<double>();
        MatrixModel m;
        if (spec.family == "pure_svd") {
            m = train_pure_svd(A2, spec.ranks[0]);
        } else {
            SimilarityMatrix sim_u = SimilarityMatrix::identity(train.user_count());
            SimilarityMatrix sim_i = item_similarity_for(spec, item_s0, train.item_count());
            m = train_hybrid_svd(A2, sim_u, sim_i, spec.ranks[0]);
        }
        return std::make_unique<MatrixRecommender>(std::move(m), spec.binarize_matrix);
    }
    if (spec.family == "most_popular") {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(train.interactions.size());
        for (const auto& x : train.interactions) pairs.emplace_back(x.user, x.item);
        return std::make_unique<PopularityRecommender>(most_popular(pairs, train.item_count()));
    }
    if (spec.family == "content_based") {
        Matrix s0 = item_s0.value_or(Matrix::Zero(train.item_count(), train.item_count()));
        return std::make_unique<ContentRecommender>(std::move(s0));
    }
    throw ConfigError("unknown model family: " + spec.family);
}

namespace {

struct UserEval {
    std::set<int> positives, negatives;
    std::vector<int> ranking;
};

Dataset training_subset(const Dataset& d, const SplitPlan& split, int fold) {
    std::set<std::size_t> held;
    for (const auto& [user, idxs] : split.holdout) {
        if (split.fold_of_user[user] == fold) held.insert(idxs.begin(), idxs.end());
    }
    Dataset train = d;
    train.interactions.clear();
    for (std::size_t idx = 0; idx < d.interactions.size(); ++idx) {
        if (!held.count(idx)) train.interactions.push_back(d.interactions[idx]);
    }
    return train;
}

}  // namespace

std::map<std::string, MetricReport> run_experiment(const Dataset& d,
                                                   const std::vector<ModelSpec>& specs,
                                                   const SplitPlan& split,
                                                   const EvalConfig& cfg) {
    const int positive_idx = d.positive_threshold_index(cfg.positive_rating);
    std::map<std::string, MetricReport> reports;
    for (const auto& spec : specs) {
        MetricReport r;
        r.cutoffs = cfg.cutoffs;
        r.metadata["family"] = spec.family;
        r.metadata["roc_convention"] = "holdout_only";
        reports[spec.name] = std::move(r);
    }

    for (int fold = 0; fold < split.n_folds; ++fold) {
        Dataset train = training_subset(d, split, fold);
        std::vector<std::vector<Interaction>> history(d.user_count());
        for (const auto& x : train.interactions) history[x.user].push_back(x);

        // Marked users of this fold with their holdout labels.
        std::vector<std::pair<int, UserEval>> users;
        for (const auto& [user, idxs] : split.holdout) {
            if (split.fold_of_user[user] != fold) continue;
            UserEval ue;
            for (std::size_t idx : idxs) {
                const auto& x = d.interactions[idx];
                if (x.rating >= cfg.positive_rating - 1e-9) {
                    ue.positives.insert(x.item);
                } else {
                    ue.negatives.insert(x.item);
                }
            }
            users.emplace_back(user, std::move(ue));
        }

        for (const auto& spec : specs) {
            std::optional<Matrix> item_s0 = blended_item_similarity(
                train, spec.measure, spec.sim_sparsify_threshold);
            auto rec = fit_model(spec, train, item_s0, positive_idx);
            MetricReport& report = reports[spec.name];

            std::map<int, double> ndcg_sum, ndcl_sum;
            double auc_sum = 0.0;
            int auc_users = 0;
            std::vector<double> tpr_acc, fpr_acc;
            int curve_users = 0;

            for (auto& [user, ue] : users) {
                std::set<int> exclude;
                for (const auto& x : history[user]) exclude.insert(x.item);
                for (int item : ue.positives) {
                    if (exclude.count(item)) throw Error("LeakDetected", "holdout item in history");
                }
                for (int item : ue.negatives) {
                    if (exclude.count(item)) throw Error("LeakDetected", "holdout item in history");
                }
                ue.ranking = rec->rank(history[user], exclude);
                for (int n : cfg.cutoffs) {
                    ndcg_sum[n] += ndcg_at_n(ue.ranking, ue.positives, n);
                    ndcl_sum[n] += ndcl_at_n(ue.ranking, ue.negatives, n);
                }
                if (!ue.positives.empty() && !ue.negatives.empty()) {
                    auc_sum += roc_auc(roc_points(ue.ranking, ue.positives, ue.negatives));
                    ++auc_users;
                    if (cfg.emit_roc_curves) {
                        if (tpr_acc.empty()) {
                            tpr_acc.assign(ue.ranking.size() + 1, 0.0);
                            fpr_acc.assign(ue.ranking.size() + 1, 0.0);
                        }
                        int tp = 0, fp = 0;
                        for (std::size_t p = 0; p < ue.ranking.size(); ++p) {
                            tp += ue.positives.count(ue.ranking[p]);
                            fp += ue.negatives.count(ue.ranking[p]);
                            if (p + 1 < tpr_acc.size()) {
                                tpr_acc[p + 1] += tp / double(ue.positives.size());
                                fpr_acc[p + 1] += fp / double(ue.negatives.size());
                            }
                        }
                        ++curve_users;
                    }
                }
            }

            const double nu = users.empty() ? 1.0 : static_cast<double>(users.size());
            for (int n : cfg.cutoffs) {
                report.per_fold["ndcg"][n].push_back(ndcg_sum[n] / nu);
                report.per_fold["ndcl"][n].push_back(ndcl_sum[n] / nu);
            }
            report.per_fold["auc"][0].push_back(auc_users ? auc_sum / auc_users : 0.0);
            if (cfg.emit_roc_curves) {
                std::vector<std::pair<double, double>> curve;
                curve.emplace_back(0.0, 0.0);
                for (std::size_t p = 1; p < tpr_acc.size(); ++p) {
                    if (curve_users) {
                        curve.emplace_back(fpr_acc[p] / curve_users, tpr_acc[p] / curve_users);
                    }
                }
                report.roc_curves.push_back(std::move(curve));
            }
        }
    }

    for (auto& [name, report] : reports) {
        for (const auto& [metric, by_cutoff] : report.per_fold) {
            for (const auto& [n, values] : by_cutoff) {
                report.summary[metric][n] =
                    values.size() >= 2 ? paired_ci(values)
                                       : std::make_pair(values.empty() ? 0.0 : values[0], 0.0);
            }
        }
    }
    return reports;
}

void write_reports_csv(const std::map<std::string, MetricReport>& reports, std::ostream& out) {
    out << "model,fold,metric,n,value\n";
    out.precision(17);
    for (const auto& [name, report] : reports) {
        for (const auto& [metric, by_cutoff] : report.per_fold) {
            for (const auto& [n, values] : by_cutoff) {
                for (std::size_t fold = 0; fold < values.size(); ++fold) {
                    out << name << ',' << fold << ',' << metric << ',' << n << ','
                        << values[fold] << '\n';
                }
            }
        }
    }
}

void write_reports_json(const std::map<std::string, MetricReport>& reports, std::ostream& out) {
    nlohmann::json root;
    for (const auto& [name, report] : reports) {
        nlohmann::json jm;
        jm["metadata"] = report.metadata;
        for (const auto& [metric, by_cutoff] : report.per_fold) {
            for (const auto& [n, values] : by_cutoff) {
                nlohmann::json entry;
                entry["n"] = n;
                entry["per_fold"] = values;
                if (report.summary.count(metric) && report.summary.at(metric).count(n)) {
                    const auto& [mean, half] = report.summary.at(metric).at(n);
                    entry["mean"] = mean;
                    entry["ci95_halfwidth"] = half;
                }
                jm[metric].push_back(entry);
            }
        }
        root[name] = std::move(jm);
    }
    out << root.dump(2) << '\n';
}

void write_roc_csv(const std::map<std::string, MetricReport>& reports, std::ostream& out) {
    out << "model,fold,fpr,tpr\n";
    out.precision(17);
    for (const auto& [name, report] : reports) {
        for (std::size_t fold = 0; fold < report.roc_curves.size(); ++fold) {
            for (const auto& [fpr, tpr] : report.roc_curves[fold]) {
                out << name << ',' << fold << ',' << fpr << ',' << tpr << '\n';
            }
        }
    }
}

namespace {

double mean_ndcg10(const Recommender& rec, const Dataset& d, const SplitPlan& split,
                   const std::vector<std::vector<Interaction>>& history, int fold,
                   double positive_rating) {
    double sum = 0.0;
    int count = 0;
    for (const auto& [user, idxs] : split.holdout) {
        if (split.fold_of_user[user] != fold) continue;
        std::set<int> positives, exclude;
        for (std::size_t idx : idxs) {
            const auto& x = d.interactions[idx];
            if (x.rating >= positive_rating - 1e-9) positives.insert(x.item);
        }
        for (const auto& x : history[user]) exclude.insert(x.item);
        sum += ndcg_at_n(rec.rank(history[user], exclude), positives, 10);
        ++count;
    }
    return count ? sum / count : 0.0;
}

}  // namespace

TuneResult tune(const Dataset& d, const ModelSpec& base, const TuneGrids& grids,
                const EvalConfig& cfg) {
    const bool tensor_family = base.family == "coffee" || base.family == "hybrid_coffee";
    const bool matrix_family = base.family == "pure_svd" || base.family == "hybrid_svd";
    const bool hybrid = base.family == "hybrid_coffee" || base.family == "hybrid_svd";
    TuneResult result;
    result.best = base;
    if (!tensor_family && !matrix_family) return result;  // nothing to tune
    if (grids.ranks.empty() || (tensor_family && grids.rank3s.empty())) {
        throw EmptyGrid("tune: rank grid is empty");
    }

    SplitPlan split = make_split(d, cfg.n_folds, cfg.holdout_size, cfg.mark_fraction,
                                 cfg.min_remainder, cfg.seed);
    Dataset train = training_subset(d, split, 0);
    std::vector<std::vector<Interaction>> history(d.user_count());
    for (const auto& x : train.interactions) history[x.user].push_back(x);
    const int positive_idx = d.positive_threshold_index(cfg.positive_rating);

    std::vector<int> ranks = grids.ranks;
    std::sort(ranks.begin(), ranks.end());
    std::vector<int> rank3s = grids.rank3s.empty() ? std::vector<int>{1} : grids.rank3s;
    std::sort(rank3s.begin(), rank3s.end());
    std::vector<double> weights = grids.weights;
    std::sort(weights.begin(), weights.end());

    // Rank stage at a fixed side-information weight of 0.5 for hybrid
    // families; the sweep reuses one trained model via rounding/truncation.
    ModelSpec stage = base;
    stage.beta = hybrid ? 0.5 : 0.0;

    double best_score = -1.0;
    std::array<int, 3> best_ranks = {ranks.back(), ranks.back(), rank3s.back()};

    std::optional<Matrix> item_s0 =
        blended_item_similarity(train, base.measure, base.sim_sparsify_threshold);

    if (tensor_family) {
        ModelSpec full = stage;
        full.ranks = {ranks.back(), ranks.back(), rank3s.back()};
        auto rec = fit_model(full, train, item_s0, positive_idx);
        result.train_calls_rank_stage = 1;
        const auto* trained = dynamic_cast<const TensorRecommender*>(rec.get());
        for (int r : ranks) {
            for (int r3 : rank3s) {
                HybridTuckerModel rounded = round_rank(trained->model(), {r, r, r3});
                TensorRecommender probe(std::move(rounded), train.rating_scale, base.aggregator,
                                        positive_idx);
                double score =
                    mean_ndcg10(probe, d, split, history, 0, cfg.positive_rating);
                result.table.emplace_back(
                    "r=" + std::to_string(r) + ",r3=" + std::to_string(r3), score);
                if (score > best_score) {
                    best_score = score;
                    best_ranks = {r, r, r3};
                }
            }
        }
    } else {
        // One decomposition at the top rank; lower ranks by truncation.
        Matrix A2 = to_matrix(train);
        if (base.binarize_matrix) A2 = (A2.array() != 0.0).cast<double>();
        SimilarityMatrix sim_u = SimilarityMatrix::identity(train.user_count());
        SimilarityMatrix sim_i = item_similarity_for(stage, item_s0, train.item_count());
        Matrix weighted = sim_i.apply_lt(sim_u.apply_lt(A2).transpose()).transpose();
        SvdTriplet svd = truncated_svd(weighted, ranks.back());
        result.train_calls_rank_stage = 1;
        for (int r : ranks) {
            MatrixModel m;
            m.kind = base.family == "pure_svd" ? MatrixModelKind::pure_svd
                                               : MatrixModelKind::hybrid_svd;
            Matrix v_hat = svd.V.leftCols(r);
            m.V = sim_i.solve_lt(v_hat);
            m.V_S = sim_i.apply_l(v_hat);
            MatrixRecommender probe(std::move(m), base.binarize_matrix);
            double score = mean_ndcg10(probe, d, split, history, 0, cfg.positive_rating);
            result.table.emplace_back("r=" + std::to_string(r), score);
            if (score > best_score) {
                best_score = score;
                best_ranks = {r, r, rank3s.back()};
            }
        }
        best_ranks[2] = 1;
    }

    result.best.ranks = best_ranks;
    result.best_ndcg = best_score;

    if (hybrid && !weights.empty() && item_s0.has_value()) {
        double best_weight_score = -1.0;
        double best_weight = weights.front();
        for (double w : weights) {
            ModelSpec probe_spec = result.best;
            probe_spec.beta = w;
            auto rec = fit_model(probe_spec, train, item_s0, positive_idx);
            ++result.train_calls_weight_stage;
            double score = mean_ndcg10(*rec, d, split, history, 0, cfg.positive_rating);
            result.table.emplace_back("w=" + std::to_string(w), score);
            if (score > best_weight_score) {
                best_weight_score = score;
                best_weight = w;
            }
        }
        result.best.beta = best_weight;
        result.best_ndcg = best_weight_score;
    } else if (hybrid) {
        result.best.beta = stage.beta;
    }
    return result;
}

}  // namespace tenrec
