#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tenrec/similarity.hpp"
#include "tenrec/tensor.hpp"

namespace tenrec {

struct Interaction {
    int user;
    int item;
    double rating;
};

enum class RatingScale { integer_1_5, half_star };

std::vector<double> scale_values(RatingScale scale);
RatingScale parse_scale(const std::string& name);

int rating_to_index(double rating, const std::vector<double>& scale);
double index_to_rating(int idx, const std::vector<double>& scale);

struct Dataset {
    std::vector<Interaction> interactions;
    std::vector<std::string> user_ids;  // dense index -> external id
    std::vector<std::string> item_ids;
    std::map<std::string, int> user_index;
    std::map<std::string, int> item_index;
    std::vector<double> rating_scale;
    FeatureTable item_features;
    std::map<std::string, std::string> metadata;

    int user_count() const { return static_cast<int>(user_ids.size()); }
    int item_count() const { return static_cast<int>(item_ids.size()); }
    int feedback_levels() const { return static_cast<int>(rating_scale.size()); }

    // Index of the first scale value considered a positive rating (>= 4.0).
    int positive_threshold_index(double positive_rating = 4.0) const;
};

// MovieLens `user::item::rating::timestamp` or CSV (`userId,movieId,rating,...`).
Dataset load_movielens(std::istream& in, RatingScale scale);
Dataset load_movielens_file(const std::string& path, RatingScale scale);

// BookCrossing CSV (`;`-separated, quoted fields, raw ratings 1..10). Drops
// implicit rating-0 rows, then users with >1000 ratings, then books with a
// single rating; remaining ratings are halved onto the half-star scale.
Dataset load_bookcrossing(std::istream& in);
Dataset load_bookcrossing_file(const std::string& path);

// Canonical dump: `user_id<TAB>item_id<TAB>rating` lines.
Dataset load_canonical(std::istream& in, RatingScale scale);
void save_canonical(const Dataset& d, std::ostream& out);

// One tensor entry of value 1.0 per interaction, at the rating's feedback index.
SparseTensor3 to_tensor(const Dataset& d, bool binary_values = true);
// Dense user-item ratings matrix, materialized on demand.
Matrix to_matrix(const Dataset& d);

void attach_features_file(Dataset& d, const std::string& path);

}  // namespace tenrec
