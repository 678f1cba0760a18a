#include <doctest.h>

#include <Eigen/Dense>

#include "rwplab/rng.hpp"
#include "rwplab/svd.hpp"

using rwplab::CounterRng;
using rwplab::jacobi_svd;
using rwplab::SvdResult;

namespace {

Eigen::MatrixXd random_matrix(int m, int n, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();
    return a;
}

void check_factorization(const Eigen::MatrixXd& a) {
    const SvdResult svd = jacobi_svd(a);
    const double scale = std::max(1.0, a.norm());
    CHECK((svd.reconstruct() - a).norm() / scale < 1e-12);
    CHECK((svd.U.transpose() * svd.U - Eigen::MatrixXd::Identity(svd.U.cols(), svd.U.cols())).norm() <
          1e-12);
    CHECK((svd.V.transpose() * svd.V - Eigen::MatrixXd::Identity(svd.V.cols(), svd.V.cols())).norm() <
          1e-12);
    // Values agree with Eigen's implementation (independent route).
    Eigen::JacobiSVD<Eigen::MatrixXd> ref(a);
    for (int i = 0; i < ref.singularValues().size(); ++i) {
        CHECK(svd.singular_values(i) == doctest::Approx(ref.singularValues()(i)).epsilon(1e-10));
    }
    for (int i = 0; i + 1 < svd.singular_values.size(); ++i) {
        CHECK(svd.singular_values(i) >= svd.singular_values(i + 1));
    }
}

}  // namespace

TEST_CASE("factorization on random shapes") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        check_factorization(random_matrix(6, 6, seed));
        check_factorization(random_matrix(9, 4, seed + 100));
        check_factorization(random_matrix(4, 9, seed + 200));
        check_factorization(random_matrix(1, 5, seed + 300));
        check_factorization(random_matrix(5, 1, seed + 400));
    }
}

TEST_CASE("rank deficient and zero matrices") {
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(4, 3);
    check_factorization(z);

    Eigen::MatrixXd a = random_matrix(6, 2, 7);
    Eigen::MatrixXd low = a * a.transpose();  // rank 2, 6x6
    check_factorization(low);
    const SvdResult svd = jacobi_svd(low);
    CHECK(svd.singular_values(2) < 1e-10 * svd.singular_values(0));
}

TEST_CASE("deterministic output and sign convention") {
    const Eigen::MatrixXd a = random_matrix(8, 5, 42);
    const SvdResult s1 = jacobi_svd(a);
    const SvdResult s2 = jacobi_svd(a);
    CHECK((s1.U - s2.U).norm() == 0.0);
    CHECK((s1.V - s2.V).norm() == 0.0);
    for (int j = 0; j < s1.U.cols(); ++j) {
        const double col_max = s1.U.col(j).cwiseAbs().maxCoeff();
        for (int i = 0; i < s1.U.rows(); ++i) {
            if (std::abs(s1.U(i, j)) > 1e-12 * col_max) {
                CHECK(s1.U(i, j) > 0.0);
                break;
            }
        }
    }
}

TEST_CASE("pseudo inverse solves least squares") {
    const Eigen::MatrixXd a = random_matrix(7, 4, 3);
    const Eigen::MatrixXd pinv = rwplab::pseudo_inverse(a);
    CHECK((a * pinv * a - a).norm() < 1e-10);
    CHECK((pinv * a * pinv - pinv).norm() < 1e-10);
}

TEST_CASE("symmetric square roots") {
    const Eigen::MatrixXd g = random_matrix(5, 5, 11);
    const Eigen::MatrixXd s = g * g.transpose() + Eigen::MatrixXd::Identity(5, 5);
    const Eigen::MatrixXd r = rwplab::symmetric_sqrt(s);
    CHECK((r * r - s).norm() / s.norm() < 1e-12);
    const Eigen::MatrixXd inv_r = rwplab::symmetric_inv_sqrt(s);
    CHECK((inv_r * s * inv_r - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-11);

    Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(3, 3);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(rwplab::symmetric_inv_sqrt(singular), std::domain_error);
}
