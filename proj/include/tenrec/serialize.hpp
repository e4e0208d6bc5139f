#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tenrec/baselines.hpp"
#include "tenrec/model.hpp"

namespace tenrec {

// Single-file model container, magic `HCF1`, little-endian 64-bit floats.
// Similarity matrices are not persisted; the stored factor caches are all
// folding-in and scoring need.
struct SavedModel {
    enum class Kind : std::uint8_t { hybrid_tucker = 0, pure_svd = 1, hybrid_svd = 2, popularity = 3 };

    Kind kind = Kind::hybrid_tucker;
    std::uint64_t fingerprint = 0;
    std::vector<double> rating_scale;
    std::vector<std::string> item_ids;
    Aggregator aggregator = Aggregator::positive_mass;

    HybridTuckerModel tucker;     // kind == hybrid_tucker
    MatrixModel matrix;           // kind == pure_svd / hybrid_svd
    PopularityModel popularity;   // kind == popularity
};

void save_model(const SavedModel& m, std::ostream& out);
SavedModel load_model(std::istream& in);

void save_model_file(const SavedModel& m, const std::string& path);
SavedModel load_model_file(const std::string& path);

}  // namespace tenrec
