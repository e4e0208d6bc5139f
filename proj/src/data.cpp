#include "tenrec/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tenrec {

namespace {

std::vector<std::string> split(const std::string& line, const std::string& delim) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(delim, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + delim.size();
    }
    return out;
}

std::string strip_quotes(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_rating(const std::string& s, std::size_t lineno) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad rating '" + s + "'");
    }
}

int intern(const std::string& id, std::map<std::string, int>& index,
           std::vector<std::string>& ids) {
    auto [it, inserted] = index.emplace(id, static_cast<int>(ids.size()));
    if (inserted) ids.push_back(id);
    return it->second;
}

struct RawInteraction {
    std::string user, item;
    double rating;
};

Dataset from_raw(std::vector<RawInteraction> raw, std::vector<double> scale) {
    Dataset d;
    d.rating_scale = std::move(scale);
    for (const auto& r : raw) {
        rating_to_index(r.rating, d.rating_scale);  // validates the value
        Interaction x;
        x.user = intern(r.user, d.user_index, d.user_ids);
        x.item = intern(r.item, d.item_index, d.item_ids);
        x.rating = r.rating;
        d.interactions.push_back(x);
    }
    return d;
}

}  // namespace

std::vector<double> scale_values(RatingScale scale) {
    switch (scale) {
        case RatingScale::integer_1_5:
            return {1, 2, 3, 4, 5};
        case RatingScale::half_star: {
            std::vector<double> v;
            for (int k = 1; k <= 10; ++k) v.push_back(0.5 * k);
            return v;
        }
    }
    throw ConfigError("unknown rating scale");
}

RatingScale parse_scale(const std::string& name) {
    if (name == "integer_1_5") return RatingScale::integer_1_5;
    if (name == "half_star") return RatingScale::half_star;
    throw ConfigError("unknown rating scale: " + name);
}

int rating_to_index(double rating, const std::vector<double>& scale) {
    for (std::size_t k = 0; k < scale.size(); ++k) {
        if (std::abs(scale[k] - rating) < 1e-9) return static_cast<int>(k);
    }
    throw UnknownRatingValue("rating " + std::to_string(rating) + " not on the scale");
}

double index_to_rating(int idx, const std::vector<double>& scale) {
    if (idx < 0 || idx >= static_cast<int>(scale.size())) {
        throw IndexOutOfRange("feedback index " + std::to_string(idx));
    }
    return scale[idx];
}

int Dataset::positive_threshold_index(double positive_rating) const {
    for (std::size_t k = 0; k < rating_scale.size(); ++k) {
        if (rating_scale[k] >= positive_rating - 1e-9) return static_cast<int>(k);
    }
    return static_cast<int>(rating_scale.size());
}

Dataset load_movielens(std::istream& in, RatingScale scale) {
    std::vector<RawInteraction> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.find("userId") != std::string::npos) continue;  // CSV header
        std::vector<std::string> parts =
            line.find("::") != std::string::npos ? split(line, "::") : split(line, ",");
        if (parts.size() < 3) {
            throw ParseError("line " + std::to_string(lineno) + ": expected user, item, rating");
        }
        raw.push_back({parts[0], parts[1], parse_rating(parts[2], lineno)});
    }
    Dataset d = from_raw(std::move(raw), scale_values(scale));
    d.metadata["format"] = "movielens";
    d.metadata["scale"] = scale == RatingScale::integer_1_5 ? "integer_1_5" : "half_star";
    return d;
}

Dataset load_bookcrossing(std::istream& in) {
    std::vector<RawInteraction> raw;
    std::string line;
    std::size_t lineno = 0;
    std::size_t zero_dropped = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> parts =
            line.find(';') != std::string::npos ? split(line, ";") : split(line, ",");
        if (parts.size() < 3) {
            throw ParseError("line " + std::to_string(lineno) + ": expected user;isbn;rating");
        }
        std::string user = strip_quotes(parts[0]);
        std::string item = strip_quotes(parts[1]);
        std::string rating_s = strip_quotes(parts[2]);
        if (lineno == 1 && (user == "User-ID" || rating_s == "Book-Rating")) continue;
        double rating = parse_rating(rating_s, lineno);
        if (rating == 0.0) {  // implicit feedback rows carry no rating signal
            ++zero_dropped;
            continue;
        }
        raw.push_back({user, item, rating / 2.0});
    }
    // Filter heavy users first, then single-rating books, then rebuild maps.
    std::map<std::string, std::size_t> user_counts;
    for (const auto& r : raw) ++user_counts[r.user];
    std::vector<RawInteraction> kept;
    for (auto& r : raw) {
        if (user_counts[r.user] <= 1000) kept.push_back(std::move(r));
    }
    std::map<std::string, std::size_t> item_counts;
    for (const auto& r : kept) ++item_counts[r.item];
    std::vector<RawInteraction> final_raw;
    for (auto& r : kept) {
        if (item_counts[r.item] > 1) final_raw.push_back(std::move(r));
    }
    Dataset d = from_raw(std::move(final_raw), scale_values(RatingScale::half_star));
    d.metadata["format"] = "bookcrossing";
    d.metadata["scale"] = "half_star";
    d.metadata["zero_rating_rows_dropped"] = std::to_string(zero_dropped);
    d.metadata["filters"] = "drop_zero_ratings,users_gt_1000,items_with_single_rating";
    return d;
}

Dataset load_canonical(std::istream& in, RatingScale scale) {
    std::vector<RawInteraction> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> parts = split(line, "\t");
        if (parts.size() != 3) {
            throw ParseError("line " + std::to_string(lineno) + ": expected user\titem\trating");
        }
        raw.push_back({parts[0], parts[1], parse_rating(parts[2], lineno)});
    }
    Dataset d = from_raw(std::move(raw), scale_values(scale));
    d.metadata["format"] = "canonical";
    return d;
}

void save_canonical(const Dataset& d, std::ostream& out) {
    out.precision(17);
    for (const auto& x : d.interactions) {
        out << d.user_ids[x.user] << '\t' << d.item_ids[x.item] << '\t' << x.rating << '\n';
    }
}

SparseTensor3 to_tensor(const Dataset& d, bool binary_values) {
    std::vector<SparseTensor3::Entry> entries;
    entries.reserve(d.interactions.size());
    for (const auto& x : d.interactions) {
        int f = rating_to_index(x.rating, d.rating_scale);
        entries.push_back({x.user, x.item, f, binary_values ? 1.0 : x.rating});
    }
    return SparseTensor3::build(std::move(entries),
                                {d.user_count(), d.item_count(), d.feedback_levels()});
}

Matrix to_matrix(const Dataset& d) {
    Matrix A = Matrix::Zero(d.user_count(), d.item_count());
    for (const auto& x : d.interactions) A(x.user, x.item) = x.rating;
    return A;
}

Dataset load_movielens_file(const std::string& path, RatingScale scale) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return load_movielens(in, scale);
}

Dataset load_bookcrossing_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return load_bookcrossing(in);
}

void attach_features_file(Dataset& d, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    d.item_features = load_feature_table(in, d.item_index, d.item_count());
}

}  // namespace tenrec
