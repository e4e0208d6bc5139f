#pragma once

#include <set>
#include <string>
#include <vector>

#include "tenrec/similarity.hpp"

namespace tenrec {

enum class MatrixModelKind { pure_svd, hybrid_svd };

// SVD-based matrix model; only the item side is needed for folding-in.
struct MatrixModel {
    MatrixModelKind kind = MatrixModelKind::pure_svd;
    Matrix V;    // original-space item factors, L_S^-T V_hat
    Matrix V_S;  // L_S V_hat (equals V for identity similarity)
};

MatrixModel train_pure_svd(const Matrix& interactions, int rank);

// SVD of L_K^T A L_S. Identity similarities on both sides take the PureSVD
// path bitwise.
MatrixModel train_hybrid_svd(const Matrix& interactions, const SimilarityMatrix& sim_users,
                             const SimilarityMatrix& sim_items, int rank);

// Predicted rating vector for a user's known ratings p: V V_S^T p.
Vector fold_in_matrix(const MatrixModel& model, const Vector& p);

struct PopularityModel {
    std::vector<std::int64_t> counts;
};

PopularityModel most_popular(const std::vector<std::pair<int, int>>& user_item_pairs,
                             int item_count);

// Items by descending count, ties to lower index.
std::vector<int> popularity_ranking(const PopularityModel& model);

// score(j) = sum over history items i of S0[j, i].
Vector content_based_scores(const Matrix& S0, const std::set<int>& history);

}  // namespace tenrec
