#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "rwplab/sensing_operator.hpp"

namespace rwplab {

// Spectral summary of the spiked covariance (1/M)(I + 11^T).
struct SpikedStats {
    double sigma_max_sq = 0.0;  // (N+1)/M
    double sigma_min_sq = 0.0;  // 1/M
    double v = 0.0;             // largest diagonal entry, 2/M
};

struct EnsembleSpec {
    std::string kind;  // gaussian_iid | orthonormalized | correlated_rows | spiked | subsampled_trig
    int M = 0;
    int N = 0;
    std::optional<Eigen::MatrixXd> covariance;  // required iff kind == correlated_rows
    std::uint64_t seed = 0;
};

// iid N(0,1) entries; row r is drawn from substream (seed, r), so operators
// with the same seed share leading rows.
SensingOperator gaussian_iid(int M, int N, std::uint64_t seed);

// (G G^T)^{-1/2} G, rows orthonormalized via symmetric eigendecomposition.
SensingOperator orthonormalize_rows(const Eigen::MatrixXd& g);
SensingOperator orthonormalized_gaussian(int M, int N, std::uint64_t seed);

// Rows are iid Sigma^{1/2} g draws; identical bit pattern to gaussian_iid
// when covariance is exactly the identity.
SensingOperator correlated_rows(const Eigen::MatrixXd& covariance, int M, std::uint64_t seed);

// Covariance (1/M)(I_N + 1_N 1_N^T) and its closed-form stats, verified
// against the eigensolver by the test suite.
std::pair<Eigen::MatrixXd, SpikedStats> spiked_covariance(int N, int M);
SensingOperator spiked_ensemble(int N, int M, std::uint64_t seed);

// M distinct rows of the orthonormal discrete cosine basis sampled without
// replacement, scaled by sqrt(N/M).
SensingOperator subsampled_trig(int N, int M, std::uint64_t seed);

SensingOperator make_ensemble(const EnsembleSpec& spec);

}  // namespace rwplab
