#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tenrec/linalg.hpp"

namespace tenrec {

// Per-entity token sets, one map per feature field (genres, cast, ...).
struct FeatureTable {
    int entity_count = 0;
    std::map<std::string, std::vector<std::set<std::string>>> fields;

    bool empty() const { return fields.empty(); }
    std::vector<std::string> field_names() const;
};

enum class SimilarityMeasure { jaccard, cosine_binary };

SimilarityMeasure parse_measure(const std::string& name);

// Symmetric [0,1] similarity with zero diagonal over one feature field.
Matrix field_similarity(const FeatureTable& features, const std::string& field,
                        SimilarityMeasure measure = SimilarityMeasure::jaccard);

// Elementwise mean of per-field similarity matrices.
Matrix blend_fields(const std::vector<Matrix>& matrices);

// Zeroes out entries strictly below `threshold`.
Matrix sparsify(Matrix S0, double threshold);

// S = I + weight * S0 together with its Cholesky factor. Weight zero (or a
// missing S0) collapses to an exact identity with no dense storage.
class SimilarityMatrix {
public:
    static SimilarityMatrix identity(int dim);
    static SimilarityMatrix assemble(const Matrix& S0, double weight);

    int dim() const { return dim_; }
    double weight() const { return weight_; }
    double applied_jitter() const { return jitter_; }
    bool is_identity() const { return identity_; }
    const Matrix& s0() const { return S0_; }
    const Matrix& cholesky() const { return L_; }

    Matrix full() const;                       // I + weight * S0
    Matrix apply_l(const Matrix& X) const;     // L X
    Matrix apply_lt(const Matrix& X) const;    // L^T X
    Matrix solve_lt(const Matrix& X) const;    // L^-T X

private:
    int dim_ = 0;
    double weight_ = 0.0;
    double jitter_ = 0.0;
    bool identity_ = true;
    Matrix S0_;
    Matrix L_;
};

// Reads `entity_id<TAB>field<TAB>token` lines; ids are remapped through the
// caller-provided index map, unknown ids skipped.
FeatureTable load_feature_table(std::istream& in,
                                const std::map<std::string, int>& entity_index,
                                int entity_count);

}  // namespace tenrec
