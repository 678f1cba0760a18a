#include "rwplab/sensing_operator.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rwplab {

namespace {

double power_iteration_norm(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    const int n = static_cast<int>(a.cols());
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = 1.0 + static_cast<double>(i) / (n + 1.0);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
        Eigen::VectorXd w = a.transpose() * (a * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        w /= nw;
        const double lambda_new = w.dot(a.transpose() * (a * w));
        if (std::abs(lambda_new - lambda) <= 1e-6 * std::max(1e-300, std::abs(lambda_new)) &&
            it > 2) {
            lambda = lambda_new;
            break;
        }
        lambda = lambda_new;
        v = w;
    }
    return std::sqrt(std::max(0.0, lambda));
}

const char kMagic[4] = {'R', 'W', 'P', 'O'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("operator file truncated");
    return v;
}

std::string kind_name(SensingOperator::Kind k) {
    return k == SensingOperator::Kind::dense ? "dense" : "subsampled_trig";
}

}  // namespace

SensingOperator::SensingOperator(Eigen::MatrixXd matrix, Kind kind, std::string ensemble,
                                 std::uint64_t seed, std::vector<int> row_indices)
    : matrix_(std::move(matrix)),
      kind_(kind),
      ensemble_(std::move(ensemble)),
      seed_(seed),
      row_indices_(std::move(row_indices)),
      operator_norm_(power_iteration_norm(matrix_)) {
    if (matrix_.rows() < 1 || matrix_.cols() < 1) {
        throw std::invalid_argument("SensingOperator: empty matrix");
    }
}

SensingOperator SensingOperator::dense(Eigen::MatrixXd matrix, std::string ensemble,
                                       std::uint64_t seed) {
    return SensingOperator(std::move(matrix), Kind::dense, std::move(ensemble), seed);
}

Eigen::VectorXd SensingOperator::forward(const Eigen::VectorXd& x) const {
    if (x.size() != matrix_.cols()) {
        throw std::invalid_argument("SensingOperator::forward: length " + std::to_string(x.size()) +
                                    " vs " + std::to_string(matrix_.cols()) + " columns");
    }
    return matrix_ * x;
}

Eigen::VectorXd SensingOperator::adjoint(const Eigen::VectorXd& u) const {
    if (u.size() != matrix_.rows()) {
        throw std::invalid_argument("SensingOperator::adjoint: length " + std::to_string(u.size()) +
                                    " vs " + std::to_string(matrix_.rows()) + " rows");
    }
    return matrix_.transpose() * u;
}

void SensingOperator::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write(kMagic, 4);
    write_pod(os, kFormatVersion);
    write_pod(os, static_cast<std::uint32_t>(kind_));
    write_pod(os, static_cast<std::uint64_t>(matrix_.rows()));
    write_pod(os, static_cast<std::uint64_t>(matrix_.cols()));
    write_pod(os, seed_);
    write_pod(os, static_cast<std::uint64_t>(row_indices_.size()));
    for (int idx : row_indices_) write_pod(os, static_cast<std::uint32_t>(idx));
    for (int i = 0; i < matrix_.rows(); ++i) {
        for (int j = 0; j < matrix_.cols(); ++j) write_pod(os, matrix_(i, j));
    }
    if (!os) throw std::runtime_error("write failed on " + path);
    os.close();

    std::ostringstream sidecar;
    sidecar << "{\n"
            << "  \"format\": \"rwplab-operator\",\n"
            << "  \"version\": " << kFormatVersion << ",\n"
            << "  \"kind\": \"" << kind_name(kind_) << "\",\n"
            << "  \"ensemble\": \"" << ensemble_ << "\",\n"
            << "  \"rows\": " << matrix_.rows() << ",\n"
            << "  \"cols\": " << matrix_.cols() << ",\n"
            << "  \"seed\": " << seed_ << ",\n"
            << "  \"row_indices\": [";
    for (size_t i = 0; i < row_indices_.size(); ++i) {
        sidecar << (i ? "," : "") << row_indices_[i];
    }
    sidecar << "]\n}\n";
    std::ofstream js(path + ".json", std::ios::trunc);
    if (!js) throw std::runtime_error("cannot open " + path + ".json for writing");
    js << sidecar.str();
}

SensingOperator SensingOperator::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error(path + " is not an operator container");
    }
    const auto version = read_pod<std::uint32_t>(is);
    if (version != kFormatVersion) {
        throw std::runtime_error("unsupported operator container version " + std::to_string(version));
    }
    const auto kind = static_cast<Kind>(read_pod<std::uint32_t>(is));
    const auto rows = read_pod<std::uint64_t>(is);
    const auto cols = read_pod<std::uint64_t>(is);
    const auto seed = read_pod<std::uint64_t>(is);
    const auto n_idx = read_pod<std::uint64_t>(is);
    std::vector<int> indices(n_idx);
    for (auto& idx : indices) idx = static_cast<int>(read_pod<std::uint32_t>(is));
    Eigen::MatrixXd m(rows, cols);
    for (std::uint64_t i = 0; i < rows; ++i) {
        for (std::uint64_t j = 0; j < cols; ++j) m(i, j) = read_pod<double>(is);
    }
    return SensingOperator(std::move(m), kind, "loaded", seed, std::move(indices));
}

Eigen::VectorXd read_vector_text(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::vector<double> vals;
    double v;
    while (is >> v) vals.push_back(v);
    Eigen::VectorXd out(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) out(static_cast<Eigen::Index>(i)) = vals[i];
    return out;
}

void write_vector_text(const Eigen::VectorXd& v, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    char buf[40];
    for (int i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v(i));
        os << buf;
    }
}

}  // namespace rwplab
