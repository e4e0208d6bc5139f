#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tenrec/baselines.hpp"
#include "tenrec/data.hpp"
#include "tenrec/model.hpp"

namespace tenrec {

struct SplitPlan {
    int n_folds = 5;
    std::vector<int> fold_of_user;  // -1 when the user is never marked
    // marked user -> indices into dataset.interactions forming the holdout
    std::map<int, std::vector<std::size_t>> holdout;
};

struct EvalConfig {
    int n_folds = 5;
    int holdout_size = 10;
    double mark_fraction = 0.2;
    int min_remainder = 5;
    std::vector<int> cutoffs{1, 5, 10, 20};
    std::uint64_t seed = 0;
    double positive_rating = 4.0;
    bool emit_roc_curves = true;
};

SplitPlan make_split(const Dataset& d, int n_folds, int holdout_size, double mark_fraction,
                     int min_remainder, std::uint64_t seed);

double ndcg_at_n(const std::vector<int>& ranked, const std::set<int>& holdout_positive, int n);
double ndcl_at_n(const std::vector<int>& ranked, const std::set<int>& holdout_negative, int n);

std::vector<std::pair<double, double>> roc_points(const std::vector<int>& ranked,
                                                  const std::set<int>& holdout_positive,
                                                  const std::set<int>& holdout_negative);
double roc_auc(const std::vector<std::pair<double, double>>& points);

// 95% paired-t interval: mean +- t_{0.975, k-1} * s / sqrt(k).
std::pair<double, double> paired_ci(const std::vector<double>& per_fold_values);

struct ModelSpec {
    std::string name;
    std::string family;  // coffee | hybrid_coffee | pure_svd | hybrid_svd | most_popular | content_based
    std::array<int, 3> ranks{10, 10, 2};
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    Aggregator aggregator = Aggregator::positive_mass;
    double tol = 1e-5;
    int max_iters = 25;
    std::uint64_t seed = 0;
    SimilarityMeasure measure = SimilarityMeasure::jaccard;
    double sim_sparsify_threshold = 0.0;
    bool binarize_matrix = false;
};

// A trained recommender able to rank all items for one user's history.
class Recommender {
public:
    virtual ~Recommender() = default;
    virtual std::vector<int> rank(const std::vector<Interaction>& history,
                                  const std::set<int>& exclude) const = 0;
};

// Blend of all item feature fields into one similarity matrix; nullopt when
// the dataset carries no item features.
std::optional<Matrix> blended_item_similarity(const Dataset& d, SimilarityMeasure measure,
                                              double sparsify_threshold = 0.0);

std::unique_ptr<Recommender> fit_model(const ModelSpec& spec, const Dataset& train,
                                       const std::optional<Matrix>& item_s0,
                                       int positive_threshold_index);

struct MetricReport {
    std::vector<int> cutoffs;
    // metric name -> cutoff (0 for cutoff-free metrics) -> per-fold values
    std::map<std::string, std::map<int, std::vector<double>>> per_fold;
    // same keys -> (mean, 95% CI half-width)
    std::map<std::string, std::map<int, std::pair<double, double>>> summary;
    // per fold: user-averaged (FPR, TPR) per ranking depth
    std::vector<std::vector<std::pair<double, double>>> roc_curves;
    std::map<std::string, std::string> metadata;
};

std::map<std::string, MetricReport> run_experiment(const Dataset& d,
                                                   const std::vector<ModelSpec>& specs,
                                                   const SplitPlan& split,
                                                   const EvalConfig& cfg);

void write_reports_csv(const std::map<std::string, MetricReport>& reports, std::ostream& out);
void write_reports_json(const std::map<std::string, MetricReport>& reports, std::ostream& out);
void write_roc_csv(const std::map<std::string, MetricReport>& reports, std::ostream& out);

struct TuneGrids {
    std::vector<int> ranks;    // shared mode-1/mode-2 rank values
    std::vector<int> rank3s;   // mode-3 rank values (tensor families)
    std::vector<double> weights;  // side-information weights (hybrid families)
};

struct TuneResult {
    ModelSpec best;
    double best_ndcg = 0.0;
    int train_calls_rank_stage = 0;
    int train_calls_weight_stage = 0;
    std::vector<std::pair<std::string, double>> table;  // config label -> nDCG@10
};

// Two-stage protocol on fold 0: rank sweep via rounding/truncation of one
// trained model, then a weight sweep at the best rank.
TuneResult tune(const Dataset& d, const ModelSpec& base, const TuneGrids& grids,
                const EvalConfig& cfg);

}  // namespace tenrec
