#include "tenrec/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace tenrec {

MatrixModel train_pure_svd(const Matrix& interactions, int rank) {
    SvdTriplet svd = truncated_svd(interactions, rank);
    MatrixModel m;
    m.kind = MatrixModelKind::pure_svd;
    m.V = svd.V;
    m.V_S = svd.V;
    return m;
}

MatrixModel train_hybrid_svd(const Matrix& interactions, const SimilarityMatrix& sim_users,
                             const SimilarityMatrix& sim_items, int rank) {
    if (sim_users.dim() != interactions.rows() || sim_items.dim() != interactions.cols()) {
        throw ShapeMismatch("train_hybrid_svd: similarity dims must match interactions");
    }
    if (sim_users.is_identity() && sim_items.is_identity()) {
        MatrixModel m = train_pure_svd(interactions, rank);
        m.kind = MatrixModelKind::hybrid_svd;
        return m;
    }
    Matrix weighted = sim_users.apply_lt(interactions);
    weighted = sim_items.apply_lt(weighted.transpose()).transpose();  // L_K^T A L_S
    SvdTriplet svd = truncated_svd(weighted, rank);
    MatrixModel m;
    m.kind = MatrixModelKind::hybrid_svd;
    m.V = sim_items.solve_lt(svd.V);
    m.V_S = sim_items.apply_l(svd.V);
    return m;
}

Vector fold_in_matrix(const MatrixModel& model, const Vector& p) {
    if (p.size() != model.V.rows()) throw ShapeMismatch("fold_in_matrix: length(p) != N");
    return model.V * (model.V_S.transpose() * p);
}

PopularityModel most_popular(const std::vector<std::pair<int, int>>& user_item_pairs,
                             int item_count) {
    PopularityModel m;
    m.counts.assign(item_count, 0);
    for (const auto& [user, item] : user_item_pairs) {
        if (item < 0 || item >= item_count) throw IndexOutOfRange("most_popular: item index");
        ++m.counts[item];
    }
    return m;
}

std::vector<int> popularity_ranking(const PopularityModel& model) {
    std::vector<int> order(model.counts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return model.counts[a] > model.counts[b]; });
    return order;
}

Vector content_based_scores(const Matrix& S0, const std::set<int>& history) {
    if (history.empty()) throw EmptyHistory("content_based_scores: empty history");
    Vector scores = Vector::Zero(S0.rows());
    for (int i : history) {
        if (i < 0 || i >= S0.cols()) throw IndexOutOfRange("content_based_scores: history item");
        scores += S0.col(i);
    }
    return scores;
}

}  // namespace tenrec
