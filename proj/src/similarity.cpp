#include "tenrec/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <sstream>

namespace tenrec {

std::vector<std::string> FeatureTable::field_names() const {
    std::vector<std::string> names;
    names.reserve(fields.size());
    for (const auto& [name, _] : fields) names.push_back(name);
    return names;
}

SimilarityMeasure parse_measure(const std::string& name) {
    if (name == "jaccard") return SimilarityMeasure::jaccard;
    if (name == "cosine_binary") return SimilarityMeasure::cosine_binary;
    throw ConfigError("unknown similarity measure: " + name);
}

Matrix field_similarity(const FeatureTable& features, const std::string& field,
                        SimilarityMeasure measure) {
    auto it = features.fields.find(field);
    if (it == features.fields.end()) throw UnknownField("no feature field '" + field + "'");
    const auto& sets = it->second;
    const int n = features.entity_count;
    Matrix S = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (sets[i].empty()) continue;  // entities with no features link to nothing
        for (int j = i + 1; j < n; ++j) {
            if (sets[j].empty()) continue;
            std::size_t inter = 0;
            for (const auto& tok : sets[i]) inter += sets[j].count(tok);
            if (inter == 0) continue;
            double sim = 0.0;
            switch (measure) {
                case SimilarityMeasure::jaccard:
                    sim = static_cast<double>(inter) /
                          static_cast<double>(sets[i].size() + sets[j].size() - inter);
                    break;
                case SimilarityMeasure::cosine_binary:
                    sim = static_cast<double>(inter) /
                          std::sqrt(static_cast<double>(sets[i].size()) * sets[j].size());
                    break;
            }
            S(i, j) = sim;
            S(j, i) = sim;
        }
    }
    return S;
}

Matrix blend_fields(const std::vector<Matrix>& matrices) {
    if (matrices.empty()) throw EmptyList("blend_fields: no matrices given");
    Matrix out = matrices[0];
    for (std::size_t k = 1; k < matrices.size(); ++k) {
        if (matrices[k].rows() != out.rows() || matrices[k].cols() != out.cols()) {
            throw ShapeMismatch("blend_fields: dimension mismatch");
        }
        out += matrices[k];
    }
    out /= static_cast<double>(matrices.size());
    return out;
}

Matrix sparsify(Matrix S0, double threshold) {
    if (threshold <= 0.0) return S0;
    for (Eigen::Index j = 0; j < S0.cols(); ++j)
        for (Eigen::Index i = 0; i < S0.rows(); ++i)
            if (S0(i, j) < threshold) S0(i, j) = 0.0;
    return S0;
}

SimilarityMatrix SimilarityMatrix::identity(int dim) {
    SimilarityMatrix m;
    m.dim_ = dim;
    return m;
}

SimilarityMatrix SimilarityMatrix::assemble(const Matrix& S0, double weight) {
    if (weight < 0.0) throw ConfigError("similarity weight must be nonnegative");
    if (S0.rows() != S0.cols()) throw ShapeMismatch("assemble: S0 not square");
    if (weight == 0.0) return identity(static_cast<int>(S0.rows()));
    SimilarityMatrix m;
    m.dim_ = static_cast<int>(S0.rows());
    m.weight_ = weight;
    m.identity_ = false;
    m.S0_ = S0;
    m.S0_.diagonal().setZero();
    Matrix S = weight * m.S0_;
    S.diagonal().array() += 1.0;
    CholeskyFactor f = cholesky_spd(S, JitterPolicy::auto_jitter, &m.jitter_);
    m.L_ = std::move(f.L);
    return m;
}

Matrix SimilarityMatrix::full() const {
    if (identity_) return Matrix::Identity(dim_, dim_);
    Matrix S = weight_ * S0_;
    S.diagonal().array() += 1.0 + jitter_;
    return S;
}

Matrix SimilarityMatrix::apply_l(const Matrix& X) const {
    if (X.rows() != dim_) throw ShapeMismatch("apply_l: row mismatch");
    if (identity_) return X;
    return L_.triangularView<Eigen::Lower>() * X;
}

Matrix SimilarityMatrix::apply_lt(const Matrix& X) const {
    if (X.rows() != dim_) throw ShapeMismatch("apply_lt: row mismatch");
    if (identity_) return X;
    return L_.transpose().triangularView<Eigen::Upper>() * X;
}

Matrix SimilarityMatrix::solve_lt(const Matrix& X) const {
    if (X.rows() != dim_) throw ShapeMismatch("solve_lt: row mismatch");
    if (identity_) return X;
    return solve_lower_transposed(CholeskyFactor{L_}, X);
}

FeatureTable load_feature_table(std::istream& in,
                                const std::map<std::string, int>& entity_index,
                                int entity_count) {
    FeatureTable table;
    table.entity_count = entity_count;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string id, field, token;
        if (!std::getline(ls, id, '\t') || !std::getline(ls, field, '\t') ||
            !std::getline(ls, token)) {
            throw ParseError("bad feature line " + std::to_string(lineno) + ": " + line);
        }
        auto it = entity_index.find(id);
        if (it == entity_index.end()) continue;  // feature for an entity outside the dataset
        auto& column = table.fields[field];
        if (column.empty()) column.resize(entity_count);
        column[it->second].insert(token);
    }
    return table;
}

}  // namespace tenrec
