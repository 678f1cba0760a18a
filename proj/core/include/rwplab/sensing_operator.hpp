#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace rwplab {

// Linear measurement map with dense storage, ensemble metadata, and a cached
// spectral norm estimate (power iteration on Phi^T Phi, 1e-6 relative
// convergence). Immutable after construction; safe for concurrent use.
class SensingOperator {
public:
    enum class Kind { dense, subsampled_trig };

    SensingOperator(Eigen::MatrixXd matrix, Kind kind, std::string ensemble, std::uint64_t seed,
                    std::vector<int> row_indices = {});

    static SensingOperator dense(Eigen::MatrixXd matrix, std::string ensemble = "custom",
                                 std::uint64_t seed = 0);

    int rows() const { return static_cast<int>(matrix_.rows()); }
    int cols() const { return static_cast<int>(matrix_.cols()); }
    Kind kind() const { return kind_; }
    const std::string& ensemble() const { return ensemble_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<int>& row_indices() const { return row_indices_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
    Eigen::VectorXd adjoint(const Eigen::VectorXd& u) const;
    double operator_norm() const { return operator_norm_; }

    // Flat binary container (little-endian): magic "RWPO", u32 version, u32
    // kind, u64 rows, u64 cols, u64 seed, u64 index count, u32 indices,
    // then rows*cols f64 in row-major order. A JSON descriptor sidecar is
    // written next to the binary as <path>.json.
    void save(const std::string& path) const;
    static SensingOperator load(const std::string& path);

private:
    Eigen::MatrixXd matrix_;
    Kind kind_;
    std::string ensemble_;
    std::uint64_t seed_;
    std::vector<int> row_indices_;
    double operator_norm_;
};

// Plain-text vector format: one floating point value per line.
Eigen::VectorXd read_vector_text(const std::string& path);
void write_vector_text(const Eigen::VectorXd& v, const std::string& path);

}  // namespace rwplab
