#include "rwplab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rwplab/rng.hpp"
#include "rwplab/svd.hpp"

namespace rwplab {

namespace {

Eigen::MatrixXd gaussian_matrix(int M, int N, std::uint64_t seed) {
    Eigen::MatrixXd g(M, N);
    for (int r = 0; r < M; ++r) {
        CounterRng rng(seed, static_cast<std::uint64_t>(r));
        for (int c = 0; c < N; ++c) g(r, c) = rng.next_gaussian();
    }
    return g;
}

}  // namespace

SensingOperator gaussian_iid(int M, int N, std::uint64_t seed) {
    if (M < 1 || N < 1) throw std::invalid_argument("gaussian_iid: M, N must be positive");
    return SensingOperator(gaussian_matrix(M, N, seed), SensingOperator::Kind::dense,
                           "gaussian_iid", seed);
}

SensingOperator orthonormalize_rows(const Eigen::MatrixXd& g) {
    const Eigen::MatrixXd gram = g * g.transpose();
    const Eigen::MatrixXd phi = symmetric_inv_sqrt(gram) * g;
    return SensingOperator(phi, SensingOperator::Kind::dense, "orthonormalized", 0);
}

SensingOperator orthonormalized_gaussian(int M, int N, std::uint64_t seed) {
    if (M < 1 || N < 1 || M > N) {
        throw std::invalid_argument("orthonormalized_gaussian: need 1 <= M <= N");
    }
    const Eigen::MatrixXd g = gaussian_matrix(M, N, seed);
    const Eigen::MatrixXd phi = symmetric_inv_sqrt(g * g.transpose()) * g;
    return SensingOperator(phi, SensingOperator::Kind::dense, "orthonormalized", seed);
}

SensingOperator correlated_rows(const Eigen::MatrixXd& covariance, int M, std::uint64_t seed) {
    if (covariance.rows() != covariance.cols() || covariance.rows() < 1) {
        throw std::invalid_argument("correlated_rows: covariance must be square");
    }
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, covariance.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("correlated_rows: covariance must be symmetric");
    }
    const int N = static_cast<int>(covariance.rows());
    const bool identity = (covariance - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff() == 0.0;
    Eigen::MatrixXd root;
    if (!identity) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
        if (eig.eigenvalues().minCoeff() <= 0.0) {
            throw std::invalid_argument("correlated_rows: covariance must be positive definite, "
                                        "smallest eigenvalue " +
                                        std::to_string(eig.eigenvalues().minCoeff()));
        }
        root = symmetric_sqrt(covariance);
    }
    Eigen::MatrixXd phi = gaussian_matrix(M, N, seed);
    if (!identity) phi = phi * root;  // row r becomes root * g_r
    return SensingOperator(phi, SensingOperator::Kind::dense, "correlated_rows", seed);
}

std::pair<Eigen::MatrixXd, SpikedStats> spiked_covariance(int N, int M) {
    if (N < 1 || M < 1) throw std::invalid_argument("spiked_covariance: N, M must be positive");
    Eigen::MatrixXd sigma =
        (Eigen::MatrixXd::Identity(N, N) + Eigen::MatrixXd::Ones(N, N)) / static_cast<double>(M);
    SpikedStats stats;
    stats.sigma_max_sq = static_cast<double>(N + 1) / M;
    stats.sigma_min_sq = 1.0 / M;
    stats.v = 2.0 / M;
    if (N == 1) {
        // 1x1 case: the only eigenvalue is 2/M.
        stats.sigma_max_sq = 2.0 / M;
        stats.sigma_min_sq = 2.0 / M;
    }
    return {sigma, stats};
}

SensingOperator spiked_ensemble(int N, int M, std::uint64_t seed) {
    const auto [sigma, stats] = spiked_covariance(N, M);
    (void)stats;
    SensingOperator op = correlated_rows(sigma, M, seed);
    return SensingOperator(op.matrix(), SensingOperator::Kind::dense, "spiked", seed);
}

SensingOperator subsampled_trig(int N, int M, std::uint64_t seed) {
    if (M < 1 || N < 1) throw std::invalid_argument("subsampled_trig: M, N must be positive");
    if (M > N) throw std::invalid_argument("subsampled_trig: M must not exceed N");
    // Partial Fisher-Yates draw of M distinct row indices.
    std::vector<int> pool(N);
    std::iota(pool.begin(), pool.end(), 0);
    CounterRng rng(seed, 0);
    std::vector<int> chosen(M);
    for (int i = 0; i < M; ++i) {
        const auto j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(N - i)));
        std::swap(pool[i], pool[j]);
        chosen[i] = pool[i];
    }
    std::sort(chosen.begin(), chosen.end());

    const double scale = std::sqrt(static_cast<double>(N) / M);
    Eigen::MatrixXd phi(M, N);
    for (int r = 0; r < M; ++r) {
        const int k = chosen[r];
        const double amp = (k == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N)) * scale;
        for (int j = 0; j < N; ++j) {
            phi(r, j) = amp * std::cos(std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * N));
        }
    }
    return SensingOperator(phi, SensingOperator::Kind::subsampled_trig, "subsampled_trig", seed,
                           std::move(chosen));
}

SensingOperator make_ensemble(const EnsembleSpec& spec) {
    if (spec.kind == "gaussian_iid") return gaussian_iid(spec.M, spec.N, spec.seed);
    if (spec.kind == "orthonormalized") return orthonormalized_gaussian(spec.M, spec.N, spec.seed);
    if (spec.kind == "correlated_rows") {
        if (!spec.covariance) {
            throw std::invalid_argument("make_ensemble: correlated_rows requires a covariance");
        }
        return correlated_rows(*spec.covariance, spec.M, spec.seed);
    }
    if (spec.kind == "spiked") return spiked_ensemble(spec.N, spec.M, spec.seed);
    if (spec.kind == "subsampled_trig") return subsampled_trig(spec.N, spec.M, spec.seed);
    throw std::invalid_argument("make_ensemble: unknown ensemble kind '" + spec.kind + "'");
}

}  // namespace rwplab
