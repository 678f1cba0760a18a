#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rwplab {

enum class SignalModel { weighted_sparsity, block_sparsity, gradient_sparsity, low_rank };

std::string to_string(SignalModel model);

struct WeightedSparsityParams {
    Eigen::VectorXd weights;  // strictly positive, length N
};

struct BlockStructure {
    std::vector<std::vector<int>> blocks;  // disjoint, covering partition of {0..N-1}
    int dim = 0;
};

struct GraphGradientParams {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;  // directed (i,j), gradient entry x(j)-x(i)
    int max_total_degree = 0;                // in-degree + out-degree maximum
    std::vector<int> component_of;           // weak-component id per vertex
    int num_components = 0;
};

struct LowRankParams {
    int rows = 0;
    int cols = 0;  // trace inner product <X,Y> = Tr[X Y^T]
};

// Signal model bundling ambient dimension, sharp norm, decomposition rule,
// atom approximation, and the bound L relating sharp and l2 norms on the
// auxiliary set.
class CsSpace {
public:
    static CsSpace weighted(Eigen::VectorXd weights, int sparsity);
    static CsSpace l1(int dim, int sparsity);  // weighted with unit weights
    static CsSpace block(std::vector<std::vector<int>> blocks, int ambient_dim, int sparsity);
    static CsSpace gradient(int vertices, std::vector<std::pair<int, int>> edges, int sparsity);
    static CsSpace low_rank(int rows, int cols, int sparsity);

    SignalModel model() const { return model_; }
    int ambient_dim() const { return ambient_dim_; }
    int sparsity_level() const { return sparsity_; }
    double bound_L() const { return bound_L_; }

    const WeightedSparsityParams& weighted_params() const;
    const BlockStructure& block_params() const;
    const GraphGradientParams& gradient_params() const;
    const LowRankParams& low_rank_params() const;

    // Orthogonal projection onto the ambient Hilbert space. Identity except
    // for gradient sparsity, where the per-weak-component mean is removed
    // (signals live in ker(grad)^perp but are stored in R^V).
    Eigen::VectorXd project_ambient(const Eigen::VectorXd& x) const;

    // Inner product and l2 norm of the ambient space (gradient model applies
    // project_ambient to both arguments first).
    double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    double l2_norm(const Eigen::VectorXd& x) const;

    // Model sparsity measure of a candidate atom: S_W(a), number of nonzero
    // blocks, nnz(grad a), or rank(a). Atoms are those with measure <= K
    // (weighted: S_W(a) <= K).
    double atom_measure(const Eigen::VectorXd& a) const;
    bool is_atom(const Eigen::VectorXd& a) const;

    // Matrix view helpers for the low-rank model (column-major flattening).
    Eigen::MatrixXd to_matrix(const Eigen::VectorXd& x) const;
    Eigen::VectorXd to_vector(const Eigen::MatrixXd& m) const;

private:
    CsSpace() = default;

    SignalModel model_ = SignalModel::weighted_sparsity;
    int ambient_dim_ = 0;
    int sparsity_ = 0;
    double bound_L_ = 0.0;
    std::variant<WeightedSparsityParams, BlockStructure, GraphGradientParams, LowRankParams> params_;
};

struct Decomposition {
    Eigen::VectorXd z1;
    Eigen::VectorXd z2;
};

// Residuals of the decomposition contract, evaluated for reporting and tests.
struct DecompositionCertificates {
    double reconstruction_rel = 0.0;  // ||z1+z2-z|| / max(1,||z||)
    double orthogonality_rel = 0.0;   // |<z1,z2>| / max(eps, ||z1|| ||z2||)
    double additivity_rel = 0.0;      // sharp-norm additivity defect, relative
    bool membership = false;          // z2 in the model's auxiliary set
    double z2_sharp_over_l2 = 0.0;    // ||z2||_sharp / ||z2||_2, bounded by L
};

double sharp_norm(const CsSpace& space, const Eigen::VectorXd& x);

// Decomposition z = z1 + z2 with <z1,z2> = 0, sharp_norm(a + z1) additive,
// and z2 in the auxiliary set. Throws std::domain_error when a is not an
// atom, naming the violated sparsity measure.
Decomposition decompose(const CsSpace& space, const Eigen::VectorXd& a, const Eigen::VectorXd& z);

DecompositionCertificates check_decomposition(const CsSpace& space, const Eigen::VectorXd& a,
                                              const Eigen::VectorXd& z, const Decomposition& d);

// Heuristic best atom: hard thresholding to the weight-heaviest feasible
// support, top-K blocks, rank-K truncated SVD, or greedy edge merging for
// gradient sparsity. The output is a feasible atom, not a provably optimal
// approximation.
Eigen::VectorXd best_atom_approx(const CsSpace& space, const Eigen::VectorXd& x);

// Gershgorin bound sqrt(2*Delta) on the operator norm of the graph gradient.
double gradient_operator_norm_bound(const GraphGradientParams& params);

// Edge-space image (grad x)[(i,j)] = x(j) - x(i) and its adjoint.
Eigen::VectorXd gradient_apply(const GraphGradientParams& params, const Eigen::VectorXd& x);
Eigen::VectorXd gradient_adjoint(const GraphGradientParams& params, const Eigen::VectorXd& e);

}  // namespace rwplab
