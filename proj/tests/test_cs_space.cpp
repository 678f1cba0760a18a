#include <doctest.h>

#include <Eigen/Dense>

#include "rwplab/cs_space.hpp"
#include "rwplab/rng.hpp"
#include "support/oracles.hpp"

using namespace rwplab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

CsSpace random_space(int model, std::uint64_t seed, int* n_out) {
    CounterRng rng(seed, 3);
    switch (model) {
        case 0: {
            const int n = 8 + static_cast<int>(rng.next_below(57));  // up to 64
            Eigen::VectorXd w(n);
            for (int i = 0; i < n; ++i) w(i) = 0.5 + 1.5 * rng.next_uniform();
            *n_out = n;
            return CsSpace::weighted(w, 2 + static_cast<int>(rng.next_below(4)));
        }
        case 1: {
            const int n = 8 + static_cast<int>(rng.next_below(57));
            std::vector<std::vector<int>> blocks;
            int start = 0;
            while (start < n) {
                const int len = 1 + static_cast<int>(rng.next_below(4));
                std::vector<int> b;
                for (int i = start; i < std::min(n, start + len); ++i) b.push_back(i);
                blocks.push_back(b);
                start += len;
            }
            *n_out = n;
            return CsSpace::block(std::move(blocks), n, 1 + static_cast<int>(rng.next_below(3)));
        }
        case 2: {
            const int n = 6 + static_cast<int>(rng.next_below(59));
            *n_out = n;
            return CsSpace::gradient(n, oracles::random_graph_edges(n, seed),
                                     1 + static_cast<int>(rng.next_below(3)));
        }
        default: {
            const int m = 3 + static_cast<int>(rng.next_below(14));  // up to 16
            const int c = 3 + static_cast<int>(rng.next_below(14));
            *n_out = m * c;
            return CsSpace::low_rank(m, c, 1 + static_cast<int>(rng.next_below(3)));
        }
    }
}

}  // namespace

TEST_CASE("sharp norm examples") {
    CHECK(sharp_norm(CsSpace::weighted(vec({1, 2, 1}), 2), vec({3, -1, 0})) == doctest::Approx(5.0));
    CHECK(sharp_norm(CsSpace::block({{0, 1}, {2}}, 3, 1), vec({3, 4, -2})) == doctest::Approx(7.0));
    CHECK(sharp_norm(CsSpace::gradient(3, {{0, 1}, {1, 2}}, 1), vec({0, 1, 3})) ==
          doctest::Approx(3.0));
    const CsSpace lr = CsSpace::low_rank(2, 2, 1);
    CHECK(sharp_norm(lr, lr.to_vector(Eigen::Vector2d(3, 4).asDiagonal())) == doctest::Approx(7.0));
    CHECK_THROWS_AS(sharp_norm(CsSpace::l1(4, 1), vec({1, 2})), std::invalid_argument);
}

TEST_CASE("sharp norm is a norm") {
    int n = 0;
    for (int model = 0; model < 4; ++model) {
        const CsSpace space = random_space(model, 17 + model, &n);
        for (int t = 0; t < 50; ++t) {
            const Eigen::VectorXd x = oracles::gaussian_vector(n, 100 + t, model);
            const Eigen::VectorXd y = oracles::gaussian_vector(n, 200 + t, model);
            const double sx = sharp_norm(space, x);
            const double sy = sharp_norm(space, y);
            CHECK(sharp_norm(space, x + y) <= sx + sy + 1e-9 * (sx + sy));
            CHECK(sharp_norm(space, -2.5 * x) == doctest::Approx(2.5 * sx).epsilon(1e-10));
            CHECK(sx >= 0.0);
        }
    }
}

TEST_CASE("bound L matches the closed forms") {
    CHECK(CsSpace::l1(10, 4).bound_L() == doctest::Approx(2.0));
    CHECK(CsSpace::block({{0, 1}, {2, 3}}, 4, 1).bound_L() == doctest::Approx(1.0));
    CHECK(CsSpace::gradient(3, {{0, 1}, {1, 2}}, 4).bound_L() == doctest::Approx(2.0 * 2.0 * 2.0));
    CHECK(CsSpace::low_rank(4, 4, 2).bound_L() == doctest::Approx(2.0));
    // zero signal is an atom with sharp norm zero
    for (int model = 0; model < 4; ++model) {
        int n = 0;
        const CsSpace space = random_space(model, 31 + model, &n);
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
        CHECK(sharp_norm(space, zero) == 0.0);
        CHECK(space.is_atom(zero));
    }
}

TEST_CASE("decompose examples") {
    // restriction to the support of the atom
    const CsSpace l1 = CsSpace::l1(3, 1);
    const Decomposition d = decompose(l1, vec({1, 0, 0}), vec({2, 3, 4}));
    CHECK((d.z2 - vec({2, 0, 0})).norm() == 0.0);
    CHECK((d.z1 - vec({0, 3, 4})).norm() == 0.0);

    // diagonal atom forces the identity corner split
    const CsSpace lr = CsSpace::low_rank(2, 2, 1);
    Eigen::MatrixXd a(2, 2), z(2, 2);
    a << 1, 0, 0, 0;
    z << 5, 6, 7, 8;  // [[p,q],[r,s]]
    const Decomposition dl = decompose(lr, lr.to_vector(a), lr.to_vector(z));
    Eigen::MatrixXd z1 = lr.to_matrix(dl.z1);
    Eigen::MatrixXd z2 = lr.to_matrix(dl.z2);
    CHECK(z1(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z1(1, 1) == doctest::Approx(8.0));
    CHECK(z2(0, 0) == doctest::Approx(5.0));
    CHECK(z2(0, 1) == doctest::Approx(6.0));
    CHECK(z2(1, 0) == doctest::Approx(7.0));
    CHECK(std::abs(z2(1, 1)) < 1e-12);

    // gradient path with one active edge: z1 is the projection onto signals
    // constant on the merged component
    const CsSpace grad = CsSpace::gradient(3, {{0, 1}, {1, 2}}, 1);
    const Eigen::VectorXd atom = grad.project_ambient(vec({0, 0, 3}));  // grad = (0,3), 1-sparse
    REQUIRE(grad.is_atom(atom));
    const Eigen::VectorXd z_in = vec({1.0, -2.0, 0.5});
    const Decomposition dg = decompose(grad, atom, z_in);
    const DecompositionCertificates cg = check_decomposition(grad, atom, z_in, dg);
    CHECK(cg.reconstruction_rel < 1e-10);
    CHECK(cg.orthogonality_rel < 1e-8);
    CHECK(cg.additivity_rel < 1e-8);
    CHECK(cg.membership);

    CHECK_THROWS_WITH_AS(decompose(l1, vec({1, 1, 0}), vec({1, 1, 1})),
                         doctest::Contains("sparsity measure"), std::domain_error);
}

TEST_CASE("decomposition property trials across all models") {
    constexpr int kTrials = 1000;
    for (int model = 0; model < 4; ++model) {
        int failures = 0;
        for (int t = 0; t < kTrials; ++t) {
            int n = 0;
            const CsSpace space = random_space(model, 1000ULL * model + t, &n);
            const Eigen::VectorXd a = oracles::random_atom(space, 555ULL + t);
            Eigen::VectorXd z = oracles::gaussian_vector(n, 777ULL + t, model);
            if (space.model() == SignalModel::gradient_sparsity) z = space.project_ambient(z);
            const Decomposition d = decompose(space, a, z);
            const DecompositionCertificates c = check_decomposition(space, a, z, d);
            const bool ok = c.reconstruction_rel < 1e-10 && c.orthogonality_rel < 1e-8 &&
                            c.additivity_rel < 1e-8 && c.membership &&
                            c.z2_sharp_over_l2 <= space.bound_L() + 1e-9 &&
                            sharp_norm(space, d.z2) <= space.bound_L() * space.l2_norm(z) + 1e-9;
            if (!ok) ++failures;
        }
        CAPTURE(model);
        CHECK(failures == 0);
    }
}

TEST_CASE("appendix additivity on disjoint supports") {
    const CsSpace space = CsSpace::l1(8, 2);
    const Eigen::VectorXd a = vec({2, -1, 0, 0, 0, 0, 0, 0});
    const Eigen::VectorXd v = vec({0, 0, 1.5, 0, -1.5, 0, 0, 0});  // ||v||_1 = ||a||_1 = 3
    REQUIRE(sharp_norm(space, a) == doctest::Approx(sharp_norm(space, v)));
    for (double c : {0.0, 0.5, 1.0, 3.0}) {
        CHECK(sharp_norm(space, a + c * v) ==
              doctest::Approx(sharp_norm(space, a) + c * sharp_norm(space, v)));
    }
}

TEST_CASE("best atom examples") {
    CHECK((best_atom_approx(CsSpace::l1(3, 2), vec({5, -3, 1})) - vec({5, -3, 0})).norm() == 0.0);
    const CsSpace lr = CsSpace::low_rank(2, 2, 1);
    const Eigen::VectorXd x = lr.to_vector(Eigen::Vector2d(3, 1).asDiagonal());
    CHECK((lr.to_matrix(best_atom_approx(lr, x)) -
           Eigen::MatrixXd(Eigen::Vector2d(3, 0).asDiagonal()))
              .norm() < 1e-12);
    const CsSpace bl = CsSpace::block({{0, 1}, {2, 3}}, 4, 1);
    CHECK((best_atom_approx(bl, vec({1, 1, 3, 0})) - vec({0, 0, 3, 0})).norm() == 0.0);
    // deterministic tie break: equal scores resolved in ascending index order
    CHECK((best_atom_approx(CsSpace::l1(4, 1), vec({2, 2, 2, 2})) - vec({2, 0, 0, 0})).norm() == 0.0);
}

TEST_CASE("best atom is always an atom") {
    for (int model = 0; model < 4; ++model) {
        for (int t = 0; t < 100; ++t) {
            int n = 0;
            const CsSpace space = random_space(model, 4000 + 10 * model + t, &n);
            const Eigen::VectorXd a = best_atom_approx(space, oracles::gaussian_vector(n, t, 5));
            CAPTURE(model);
            CHECK(space.is_atom(a));
            CHECK(sharp_norm(space, a) <= space.bound_L() * space.l2_norm(a) + 1e-9);
        }
    }
}

TEST_CASE("gradient operator norm bound") {
    CHECK(gradient_operator_norm_bound(CsSpace::gradient(3, {{0, 1}, {1, 2}}, 1).gradient_params()) ==
          doctest::Approx(2.0));
    // single edge: exact norm sqrt(2) and the bound is tight
    const CsSpace edge = CsSpace::gradient(2, {{0, 1}}, 1);
    CHECK(gradient_operator_norm_bound(edge.gradient_params()) == doctest::Approx(std::sqrt(2.0)));
    Eigen::MatrixXd grad(1, 2);
    grad << -1, 1;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(grad);
    CHECK(svd.singularValues()(0) == doctest::Approx(std::sqrt(2.0)));
    // empty edge set
    CHECK(gradient_operator_norm_bound(CsSpace::gradient(4, {}, 1).gradient_params()) == 0.0);
}

TEST_CASE("gershgorin bound on random graphs") {
    for (int t = 0; t < 200; ++t) {
        CounterRng rng(9000 + t, 1);
        const int n = 3 + static_cast<int>(rng.next_below(28));
        const CsSpace space = CsSpace::gradient(n, oracles::random_graph_edges(n, 9000 + t), 1);
        const auto& p = space.gradient_params();
        Eigen::MatrixXd g(static_cast<int>(p.edges.size()), n);
        g.setZero();
        for (size_t e = 0; e < p.edges.size(); ++e) {
            g(static_cast<int>(e), p.edges[e].first) = -1.0;
            g(static_cast<int>(e), p.edges[e].second) = 1.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.transpose() * g);
        CHECK(eig.eigenvalues().maxCoeff() <= 2.0 * p.max_total_degree + 1e-9);
        // operator bound on random signals
        const Eigen::VectorXd x = oracles::gaussian_vector(n, t, 2);
        CHECK(gradient_apply(p, x).norm() <=
              gradient_operator_norm_bound(p) * x.norm() + 1e-9);
    }
}

TEST_CASE("atoms obey the sharp bound") {
    for (int model = 0; model < 4; ++model) {
        for (int t = 0; t < 200; ++t) {
            int n = 0;
            const CsSpace space = random_space(model, 6000 + 10 * model + t, &n);
            const Eigen::VectorXd a = oracles::random_atom(space, 8000ULL + t);
            CAPTURE(model);
            CHECK(sharp_norm(space, a) <= space.bound_L() * space.l2_norm(a) + 1e-9);
        }
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(CsSpace::weighted(vec({1, -1}), 1), std::invalid_argument);
    CHECK_THROWS_AS(CsSpace::block({{0, 1}, {1, 2}}, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(CsSpace::block({{0}}, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(CsSpace::gradient(2, {{0, 2}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(CsSpace::low_rank(0, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(CsSpace::l1(4, 0), std::invalid_argument);
}
