#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "rwplab/cs_space.hpp"
#include "rwplab/sensing_operator.hpp"
#include "rwplab/width_rwp.hpp"

namespace rwplab {

// Subspace represented by an orthonormal basis (QR with column pivoting,
// deterministic sign convention).
class Subspace {
public:
    static Subspace from_span(const Eigen::MatrixXd& raw);
    static Subspace random(int ambient, int dim, std::uint64_t seed);

    int ambient() const { return static_cast<int>(basis_.rows()); }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }
    Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

private:
    explicit Subspace(Eigen::MatrixXd basis) : basis_(std::move(basis)) {}
    Eigen::MatrixXd basis_;
};

// Spectral norm of the projector difference; for equal dimensions also
// cross-checked against ||P_{Y perp} P_X||_2.
double gap_metric(const Subspace& x, const Subspace& y);

// min over unit x in X of ||P_Y x||_2, the smallest singular value of
// U_Y^T U_X; equals sqrt(1 - gap^2) for equal dimensions.
double min_max_correlation(const Subspace& x, const Subspace& y);

// X = (Y intersect e^perp) + span{e} for e in the alpha-thickened set of Y.
// Guarantees dim(X) = dim(Y), e in X, and gap(X,Y) < alpha.
Subspace construct_nearby_subspace(const Subspace& y, const Eigen::VectorXd& e, double alpha);

struct WidthCheckResult {
    bool holds = true;                        // no x in Y with ||x||_2 > rho ||x||_sharp found
    std::optional<Eigen::VectorXd> witness;   // violation witness when found
    double best_ratio = 0.0;                  // largest observed ||x||_2 / ||x||_sharp
};

// Searches the unit sphere of Y for width-property violations: dense grid
// for dim(Y) <= 3, projected subgradient descent with restarts otherwise.
// An optional hint vector is checked first.
WidthCheckResult width_property_check(const Subspace& y, const CsSpace& space, double rho,
                                      int restarts, std::uint64_t seed,
                                      const Eigen::VectorXd* hint = nullptr);

struct RwpBallReport {
    int trials = 0;
    int direction1_failures = 0;   // nearby subspaces on which WP failed
    bool direction2_ran = false;   // an RWP violation witness was found
    bool direction2_confirmed = false;  // and WP failed on its nearby subspace
    bool degenerate_alpha = false; // alpha > 1: subspaces are unconstrained
    RwpReport rwp;
};

// Empirical check of the RWP = gap-ball-inside-WP equivalence for operators
// with orthonormal rows. Direction 1 samples subspaces within gap alpha of
// ker(Phi) and runs the width-property check; direction 2 converts an RWP
// violation witness into a nearby WP-violating subspace.
RwpBallReport rwp_ball_harness(const SensingOperator& phi, const CsSpace& space, double rho,
                               double alpha, int trials, std::uint64_t seed);

// Orthonormal basis of ker(Phi) via the SVD.
Subspace kernel_subspace(const SensingOperator& phi);

}  // namespace rwplab
