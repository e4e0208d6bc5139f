#include "tenrec/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace tenrec {

namespace {

static_assert(std::endian::native == std::endian::little,
              "HCF1 container assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void put_u8(std::ostream& out, std::uint8_t v) { out.write(reinterpret_cast<const char*>(&v), 1); }
void put_f64s(std::ostream& out, const double* p, std::size_t n) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * 8));
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v;
    if (!in.read(reinterpret_cast<char*>(&v), 4)) throw ParseError("HCF1: truncated file");
    return v;
}
std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v;
    if (!in.read(reinterpret_cast<char*>(&v), 8)) throw ParseError("HCF1: truncated file");
    return v;
}
std::uint8_t get_u8(std::istream& in) {
    std::uint8_t v;
    if (!in.read(reinterpret_cast<char*>(&v), 1)) throw ParseError("HCF1: truncated file");
    return v;
}
void get_f64s(std::istream& in, double* p, std::size_t n) {
    if (!in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * 8))) {
        throw ParseError("HCF1: truncated array");
    }
}

void put_matrix(std::ostream& out, const Matrix& m) {
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    // row-major on disk
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v = m(i, j);
            put_f64s(out, &v, 1);
        }
    }
}

Matrix get_matrix(std::istream& in) {
    const std::uint32_t rows = get_u32(in), cols = get_u32(in);
    Matrix m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i) {
        for (std::uint32_t j = 0; j < cols; ++j) {
            double v;
            get_f64s(in, &v, 1);
            m(i, j) = v;
        }
    }
    return m;
}

void put_vecd(std::ostream& out, const std::vector<double>& v) {
    put_u32(out, static_cast<std::uint32_t>(v.size()));
    put_f64s(out, v.data(), v.size());
}

std::vector<double> get_vecd(std::istream& in) {
    std::vector<double> v(get_u32(in));
    get_f64s(in, v.data(), v.size());
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    std::string s(get_u32(in), '\0');
    if (!in.read(s.data(), static_cast<std::streamsize>(s.size()))) {
        throw ParseError("HCF1: truncated string");
    }
    return s;
}

}  // namespace

void save_model(const SavedModel& m, std::ostream& out) {
    out.write("HCF1", 4);
    put_u32(out, 1);  // container version
    put_u8(out, static_cast<std::uint8_t>(m.kind));
    put_u64(out, m.fingerprint);
    put_u8(out, static_cast<std::uint8_t>(m.aggregator));
    put_vecd(out, m.rating_scale);
    put_u32(out, static_cast<std::uint32_t>(m.item_ids.size()));
    for (const auto& id : m.item_ids) put_string(out, id);

    switch (m.kind) {
        case SavedModel::Kind::hybrid_tucker: {
            const auto& t = m.tucker;
            const auto& shape = t.core.shape();
            put_u32(out, shape[0]);
            put_u32(out, shape[1]);
            put_u32(out, shape[2]);
            put_vecd(out, t.core.values());
            for (const Matrix* mat : {&t.U_hat, &t.V_hat, &t.W_hat, &t.U_K, &t.V_S, &t.W_R,
                                      &t.U, &t.V, &t.W}) {
                put_matrix(out, *mat);
            }
            put_vecd(out, t.trace);
            put_u8(out, t.converged ? 1 : 0);
            break;
        }
        case SavedModel::Kind::pure_svd:
        case SavedModel::Kind::hybrid_svd:
            put_matrix(out, m.matrix.V);
            put_matrix(out, m.matrix.V_S);
            break;
        case SavedModel::Kind::popularity: {
            put_u32(out, static_cast<std::uint32_t>(m.popularity.counts.size()));
            for (auto c : m.popularity.counts) put_u64(out, static_cast<std::uint64_t>(c));
            break;
        }
    }
}

SavedModel load_model(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "HCF1", 4) != 0) {
        throw ParseError("not an HCF1 model file");
    }
    if (get_u32(in) != 1) throw ParseError("unsupported HCF1 version");
    SavedModel m;
    m.kind = static_cast<SavedModel::Kind>(get_u8(in));
    m.fingerprint = get_u64(in);
    m.aggregator = static_cast<Aggregator>(get_u8(in));
    m.rating_scale = get_vecd(in);
    m.item_ids.resize(get_u32(in));
    for (auto& id : m.item_ids) id = get_string(in);

    switch (m.kind) {
        case SavedModel::Kind::hybrid_tucker: {
            auto& t = m.tucker;
            const std::uint32_t r1 = get_u32(in), r2 = get_u32(in), r3 = get_u32(in);
            t.core = DenseTensor3(static_cast<int>(r1), static_cast<int>(r2), static_cast<int>(r3));
            t.core.values() = get_vecd(in);
            if (t.core.values().size() != static_cast<std::size_t>(r1) * r2 * r3) {
                throw ParseError("HCF1: core size mismatch");
            }
            for (Matrix* mat : {&t.U_hat, &t.V_hat, &t.W_hat, &t.U_K, &t.V_S, &t.W_R,
                                &t.U, &t.V, &t.W}) {
                *mat = get_matrix(in);
            }
            t.trace = get_vecd(in);
            t.converged = get_u8(in) != 0;
            t.config_fingerprint = m.fingerprint;
            break;
        }
        case SavedModel::Kind::pure_svd:
        case SavedModel::Kind::hybrid_svd:
            m.matrix.kind = m.kind == SavedModel::Kind::pure_svd ? MatrixModelKind::pure_svd
                                                                 : MatrixModelKind::hybrid_svd;
            m.matrix.V = get_matrix(in);
            m.matrix.V_S = get_matrix(in);
            break;
        case SavedModel::Kind::popularity: {
            m.popularity.counts.resize(get_u32(in));
            for (auto& c : m.popularity.counts) c = static_cast<std::int64_t>(get_u64(in));
            break;
        }
        default:
            throw ParseError("HCF1: unknown model kind");
    }
    return m;
}

void save_model_file(const SavedModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    save_model(m, out);
}

SavedModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return load_model(in);
}

}  // namespace tenrec
