#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "tenrec/similarity.hpp"
#include "tenrec/tensor.hpp"

namespace tenrec {

struct TrainConfig {
    std::array<int, 3> ranks{10, 10, 2};
    double tol = 1e-5;
    int max_iters = 25;
    std::uint64_t seed = 0;

    std::uint64_t fingerprint() const;
};

// Known preferences of a single user: sparse N x F matrix as (item, feedback)
// cells, value 1.0 unless stated otherwise.
struct PreferenceMatrix {
    int items = 0;
    int levels = 0;
    struct Cell {
        int item, feedback;
        double value;
    };
    std::vector<Cell> cells;
};

// Tucker model over the similarity-weighted auxiliary space. Auxiliary
// factors have orthonormal columns; original-space factors are K/S/R
// orthogonal.
struct HybridTuckerModel {
    DenseTensor3 core;
    Matrix U_hat, V_hat, W_hat;   // auxiliary-space factors
    Matrix U_K, V_S, W_R;         // L U_hat caches
    Matrix U, V, W;               // original-space factors, L^-T U_hat
    SimilarityMatrix sim_users, sim_items, sim_feedback;
    std::vector<double> trace;    // core norm per sweep
    bool converged = false;
    std::uint64_t config_fingerprint = 0;

    const std::array<int, 3>& ranks() const { return core.shape(); }
};

HybridTuckerModel train(const SparseTensor3& A, const SimilarityMatrix& sim_users,
                        const SimilarityMatrix& sim_items, const SimilarityMatrix& sim_feedback,
                        const TrainConfig& cfg);

// Reduces the multilinear rank via SVD of the core unfoldings; no retraining.
HybridTuckerModel round_rank(const HybridTuckerModel& model, std::array<int, 3> new_ranks);

// Predicted preference matrix for a user's known interactions: V V_S^T P W_R W^T.
Matrix fold_in_user(const HybridTuckerModel& model, const PreferenceMatrix& P);

// Item-side analogue with the mode-1/mode-2 roles swapped: U U_K^T Q W_R W^T
// for a (user x feedback) interaction matrix of one item.
Matrix fold_in_item(const HybridTuckerModel& model, const PreferenceMatrix& Q);

enum class Aggregator { positive_mass, expected_value, top_column };

Aggregator parse_aggregator(const std::string& name);

// Collapses a predicted N x F preference matrix into per-item scores and
// returns the top n, excluded items removed, ties broken by lower index.
std::vector<std::pair<int, double>> score_items(const Matrix& pred, Aggregator aggregator,
                                                int positive_threshold_index,
                                                const std::set<int>& exclude, int n,
                                                const std::vector<double>& rating_values = {});

// Dense approximation of the original tensor: core x1 U x2 V x3 W.
DenseTensor3 reconstruct_dense(const HybridTuckerModel& model);

}  // namespace tenrec
