#include "rwplab/cs_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rwplab/svd.hpp"

namespace rwplab {

namespace {

constexpr double kSupportTol = 1e-12;

struct UnionFind {
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;  // smaller root wins, deterministic
        else parent[a] = b;
    }
    std::vector<int> parent;
};

// Dense component labels 0..k-1 in order of first appearance.
std::vector<int> component_labels(UnionFind& uf, int n, int* count) {
    std::vector<int> label(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        const int r = uf.find(v);
        if (label[r] < 0) label[r] = next++;
        label[v] = label[r];
    }
    *count = next;
    return label;
}

void require_dim(const CsSpace& space, const Eigen::VectorXd& x, const char* who) {
    if (x.size() != space.ambient_dim()) {
        throw std::invalid_argument(std::string(who) + ": signal length " +
                                    std::to_string(x.size()) + " does not match ambient dimension " +
                                    std::to_string(space.ambient_dim()));
    }
}

// Mean of x over each group, expanded back to vertex space.
Eigen::VectorXd groupwise_mean(const Eigen::VectorXd& x, const std::vector<int>& group, int groups) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(groups);
    Eigen::VectorXd cnt = Eigen::VectorXd::Zero(groups);
    for (int v = 0; v < x.size(); ++v) {
        sum(group[v]) += x(v);
        cnt(group[v]) += 1.0;
    }
    Eigen::VectorXd out(x.size());
    for (int v = 0; v < x.size(); ++v) out(v) = sum(group[v]) / cnt(group[v]);
    return out;
}

int count_nonzero(const Eigen::VectorXd& v) {
    if (v.size() == 0) return 0;
    const double tol = kSupportTol * std::max(1.0, v.cwiseAbs().maxCoeff());
    int nnz = 0;
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > tol) ++nnz;
    }
    return nnz;
}

int numerical_rank(const Eigen::VectorXd& sigma, double rel_tol) {
    if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > rel_tol * sigma(0)) ++r;
    }
    return r;
}

}  // namespace

std::string to_string(SignalModel model) {
    switch (model) {
        case SignalModel::weighted_sparsity: return "weighted_sparsity";
        case SignalModel::block_sparsity: return "block_sparsity";
        case SignalModel::gradient_sparsity: return "gradient_sparsity";
        case SignalModel::low_rank: return "low_rank";
    }
    return "unknown";
}

CsSpace CsSpace::weighted(Eigen::VectorXd weights, int sparsity) {
    if (weights.size() < 1) throw std::invalid_argument("CsSpace::weighted: empty weight vector");
    if ((weights.array() <= 0.0).any()) {
        throw std::invalid_argument("CsSpace::weighted: weights must be strictly positive");
    }
    if (sparsity < 1) throw std::invalid_argument("CsSpace::weighted: sparsity level must be positive");
    CsSpace s;
    s.model_ = SignalModel::weighted_sparsity;
    s.ambient_dim_ = static_cast<int>(weights.size());
    s.sparsity_ = sparsity;
    s.bound_L_ = std::sqrt(static_cast<double>(sparsity));
    s.params_ = WeightedSparsityParams{std::move(weights)};
    return s;
}

CsSpace CsSpace::l1(int dim, int sparsity) {
    return weighted(Eigen::VectorXd::Ones(dim), sparsity);
}

CsSpace CsSpace::block(std::vector<std::vector<int>> blocks, int ambient_dim, int sparsity) {
    if (sparsity < 1) throw std::invalid_argument("CsSpace::block: sparsity level must be positive");
    std::vector<int> seen(ambient_dim, 0);
    for (const auto& b : blocks) {
        if (b.empty()) throw std::invalid_argument("CsSpace::block: empty block");
        for (int i : b) {
            if (i < 0 || i >= ambient_dim) throw std::invalid_argument("CsSpace::block: index out of range");
            if (seen[i]++) throw std::invalid_argument("CsSpace::block: blocks are not disjoint");
        }
    }
    for (int i = 0; i < ambient_dim; ++i) {
        if (!seen[i]) throw std::invalid_argument("CsSpace::block: blocks do not cover all indices");
    }
    CsSpace s;
    s.model_ = SignalModel::block_sparsity;
    s.ambient_dim_ = ambient_dim;
    s.sparsity_ = sparsity;
    s.bound_L_ = std::sqrt(static_cast<double>(sparsity));
    s.params_ = BlockStructure{std::move(blocks), ambient_dim};
    return s;
}

CsSpace CsSpace::gradient(int vertices, std::vector<std::pair<int, int>> edges, int sparsity) {
    if (vertices < 1) throw std::invalid_argument("CsSpace::gradient: need at least one vertex");
    if (sparsity < 1) throw std::invalid_argument("CsSpace::gradient: sparsity level must be positive");
    std::vector<int> degree(vertices, 0);
    UnionFind uf(vertices);
    for (const auto& [i, j] : edges) {
        if (i < 0 || i >= vertices || j < 0 || j >= vertices || i == j) {
            throw std::invalid_argument("CsSpace::gradient: invalid edge");
        }
        ++degree[i];
        ++degree[j];
        uf.unite(i, j);
    }
    GraphGradientParams p;
    p.vertices = vertices;
    p.edges = std::move(edges);
    p.max_total_degree = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
    p.component_of = component_labels(uf, vertices, &p.num_components);

    CsSpace s;
    s.model_ = SignalModel::gradient_sparsity;
    s.ambient_dim_ = vertices;
    s.sparsity_ = sparsity;
    s.bound_L_ = 2.0 * p.max_total_degree * std::sqrt(static_cast<double>(sparsity));
    s.params_ = std::move(p);
    return s;
}

CsSpace CsSpace::low_rank(int rows, int cols, int sparsity) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("CsSpace::low_rank: invalid shape");
    if (sparsity < 1) throw std::invalid_argument("CsSpace::low_rank: sparsity level must be positive");
    CsSpace s;
    s.model_ = SignalModel::low_rank;
    s.ambient_dim_ = rows * cols;
    s.sparsity_ = sparsity;
    s.bound_L_ = std::sqrt(2.0 * sparsity);
    s.params_ = LowRankParams{rows, cols};
    return s;
}

const WeightedSparsityParams& CsSpace::weighted_params() const {
    return std::get<WeightedSparsityParams>(params_);
}
const BlockStructure& CsSpace::block_params() const { return std::get<BlockStructure>(params_); }
const GraphGradientParams& CsSpace::gradient_params() const {
    return std::get<GraphGradientParams>(params_);
}
const LowRankParams& CsSpace::low_rank_params() const { return std::get<LowRankParams>(params_); }

Eigen::VectorXd CsSpace::project_ambient(const Eigen::VectorXd& x) const {
    require_dim(*this, x, "project_ambient");
    if (model_ != SignalModel::gradient_sparsity) return x;
    const auto& p = gradient_params();
    Eigen::VectorXd mean = groupwise_mean(x, p.component_of, p.num_components);
    return x - mean;
}

double CsSpace::inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    if (model_ != SignalModel::gradient_sparsity) return x.dot(y);
    return project_ambient(x).dot(project_ambient(y));
}

double CsSpace::l2_norm(const Eigen::VectorXd& x) const {
    if (model_ != SignalModel::gradient_sparsity) return x.norm();
    return project_ambient(x).norm();
}

double CsSpace::atom_measure(const Eigen::VectorXd& a) const {
    require_dim(*this, a, "atom_measure");
    switch (model_) {
        case SignalModel::weighted_sparsity: {
            const auto& w = weighted_params().weights;
            double s = 0.0;
            for (int i = 0; i < a.size(); ++i) {
                if (a(i) != 0.0) s += w(i) * w(i);
            }
            return s;
        }
        case SignalModel::block_sparsity: {
            int nz = 0;
            for (const auto& b : block_params().blocks) {
                for (int i : b) {
                    if (a(i) != 0.0) {
                        ++nz;
                        break;
                    }
                }
            }
            return nz;
        }
        case SignalModel::gradient_sparsity:
            return count_nonzero(gradient_apply(gradient_params(), a));
        case SignalModel::low_rank: {
            const SvdResult svd = jacobi_svd(to_matrix(a));
            return numerical_rank(svd.singular_values, 1e-12);
        }
    }
    return 0.0;
}

bool CsSpace::is_atom(const Eigen::VectorXd& a) const {
    return atom_measure(a) <= static_cast<double>(sparsity_) + 1e-12;
}

Eigen::MatrixXd CsSpace::to_matrix(const Eigen::VectorXd& x) const {
    const auto& p = low_rank_params();
    return Eigen::Map<const Eigen::MatrixXd>(x.data(), p.rows, p.cols);
}

Eigen::VectorXd CsSpace::to_vector(const Eigen::MatrixXd& m) const {
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

double sharp_norm(const CsSpace& space, const Eigen::VectorXd& x) {
    require_dim(space, x, "sharp_norm");
    switch (space.model()) {
        case SignalModel::weighted_sparsity:
            return (space.weighted_params().weights.array() * x.array().abs()).sum();
        case SignalModel::block_sparsity: {
            double s = 0.0;
            for (const auto& b : space.block_params().blocks) {
                double sq = 0.0;
                for (int i : b) sq += x(i) * x(i);
                s += std::sqrt(sq);
            }
            return s;
        }
        case SignalModel::gradient_sparsity:
            return gradient_apply(space.gradient_params(), x).lpNorm<1>();
        case SignalModel::low_rank:
            return jacobi_svd(space.to_matrix(x)).singular_values.sum();
    }
    return 0.0;
}

Decomposition decompose(const CsSpace& space, const Eigen::VectorXd& a, const Eigen::VectorXd& z) {
    require_dim(space, a, "decompose");
    require_dim(space, z, "decompose");
    const double measure = space.atom_measure(a);
    if (measure > static_cast<double>(space.sparsity_level()) + 1e-12) {
        throw std::domain_error("decompose: not an atom, " + to_string(space.model()) +
                                " sparsity measure " + std::to_string(measure) + " exceeds K = " +
                                std::to_string(space.sparsity_level()));
    }

    Decomposition d;
    switch (space.model()) {
        case SignalModel::weighted_sparsity: {
            d.z2 = Eigen::VectorXd::Zero(z.size());
            d.z1 = z;
            for (int i = 0; i < a.size(); ++i) {
                if (a(i) != 0.0) {
                    d.z2(i) = z(i);
                    d.z1(i) = 0.0;
                }
            }
            break;
        }
        case SignalModel::block_sparsity: {
            d.z2 = Eigen::VectorXd::Zero(z.size());
            d.z1 = z;
            for (const auto& b : space.block_params().blocks) {
                bool nz = false;
                for (int i : b) nz = nz || (a(i) != 0.0);
                if (nz) {
                    for (int i : b) {
                        d.z2(i) = z(i);
                        d.z1(i) = 0.0;
                    }
                }
            }
            break;
        }
        case SignalModel::gradient_sparsity: {
            const auto& p = space.gradient_params();
            const Eigen::VectorXd grad_a = gradient_apply(p, a);
            const double tol =
                kSupportTol * std::max(1.0, grad_a.size() ? grad_a.cwiseAbs().maxCoeff() : 0.0);
            UnionFind uf(p.vertices);
            for (int e = 0; e < static_cast<int>(p.edges.size()); ++e) {
                if (std::abs(grad_a(e)) > tol) uf.unite(p.edges[e].first, p.edges[e].second);
            }
            int groups = 0;
            const std::vector<int> label = component_labels(uf, p.vertices, &groups);
            const Eigen::VectorXd zh = space.project_ambient(z);
            d.z1 = groupwise_mean(zh, label, groups);
            d.z2 = zh - d.z1;
            break;
        }
        case SignalModel::low_rank: {
            const auto& p = space.low_rank_params();
            const int kc = std::min(space.sparsity_level(), std::min(p.rows, p.cols));
            const SvdResult svd = jacobi_svd(space.to_matrix(a));
            const Eigen::MatrixXd zm = space.to_matrix(z);
            const Eigen::MatrixXd ur = svd.U.rightCols(p.rows - kc);
            const Eigen::MatrixXd vr = svd.V.rightCols(p.cols - kc);
            const Eigen::MatrixXd z1m = ur * (ur.transpose() * zm * vr) * vr.transpose();
            d.z1 = space.to_vector(z1m);
            d.z2 = space.to_vector(zm - z1m);
            break;
        }
    }
    return d;
}

DecompositionCertificates check_decomposition(const CsSpace& space, const Eigen::VectorXd& a,
                                              const Eigen::VectorXd& z, const Decomposition& d) {
    DecompositionCertificates c;
    const Eigen::VectorXd zh =
        space.model() == SignalModel::gradient_sparsity ? space.project_ambient(z) : z;
    c.reconstruction_rel = (d.z1 + d.z2 - zh).norm() / std::max(1.0, zh.norm());
    const double n1 = d.z1.norm();
    const double n2 = d.z2.norm();
    c.orthogonality_rel = std::abs(d.z1.dot(d.z2)) / std::max(1e-300, n1 * n2);

    const double sa = sharp_norm(space, a);
    const double s1 = sharp_norm(space, d.z1);
    const double both = sharp_norm(space, a + d.z1);
    c.additivity_rel = std::abs(both - sa - s1) / std::max(1.0, sa + s1);

    const int k = space.sparsity_level();
    switch (space.model()) {
        case SignalModel::weighted_sparsity: {
            // z2 is supported inside supp(a), so S_W(z2) <= S_W(a) <= K.
            const auto& w = space.weighted_params().weights;
            double s = 0.0;
            for (int i = 0; i < d.z2.size(); ++i) {
                if (d.z2(i) != 0.0) s += w(i) * w(i);
            }
            c.membership = s <= k + 1e-12;
            break;
        }
        case SignalModel::block_sparsity:
            c.membership = space.atom_measure(d.z2) <= k + 1e-12;
            break;
        case SignalModel::gradient_sparsity: {
            const auto& p = space.gradient_params();
            const int vert_nnz = count_nonzero(d.z2);
            const int grad_nnz = count_nonzero(gradient_apply(p, d.z2));
            c.membership = vert_nnz <= 2 * k && grad_nnz <= 2 * k * p.max_total_degree;
            break;
        }
        case SignalModel::low_rank: {
            const SvdResult svd = jacobi_svd(space.to_matrix(d.z2));
            c.membership = numerical_rank(svd.singular_values, 1e-9) <= 2 * k;
            break;
        }
    }
    c.z2_sharp_over_l2 = n2 > 0.0 ? sharp_norm(space, d.z2) / n2 : 0.0;
    return c;
}

Eigen::VectorXd best_atom_approx(const CsSpace& space, const Eigen::VectorXd& x) {
    require_dim(space, x, "best_atom_approx");
    const int k = space.sparsity_level();
    switch (space.model()) {
        case SignalModel::weighted_sparsity: {
            const auto& w = space.weighted_params().weights;
            std::vector<int> order(x.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
                return std::abs(w(i) * x(i)) > std::abs(w(j) * x(j));
            });
            Eigen::VectorXd a = Eigen::VectorXd::Zero(x.size());
            double budget = static_cast<double>(k);
            for (int i : order) {
                if (x(i) == 0.0) continue;
                const double cost = w(i) * w(i);
                if (cost <= budget + 1e-12) {
                    a(i) = x(i);
                    budget -= cost;
                }
            }
            return a;
        }
        case SignalModel::block_sparsity: {
            const auto& blocks = space.block_params().blocks;
            std::vector<int> order(blocks.size());
            std::iota(order.begin(), order.end(), 0);
            std::vector<double> norms(blocks.size(), 0.0);
            for (size_t j = 0; j < blocks.size(); ++j) {
                for (int i : blocks[j]) norms[j] += x(i) * x(i);
            }
            std::stable_sort(order.begin(), order.end(),
                             [&](int i, int j) { return norms[i] > norms[j]; });
            Eigen::VectorXd a = Eigen::VectorXd::Zero(x.size());
            for (int j = 0; j < std::min<int>(k, order.size()); ++j) {
                for (int i : blocks[order[j]]) a(i) = x(i);
            }
            return a;
        }
        case SignalModel::gradient_sparsity: {
            // Greedy edge merging: force equality across the currently
            // smallest gradient entries until the gradient is K-sparse.
            const auto& p = space.gradient_params();
            UnionFind uf(p.vertices);
            int groups = 0;
            std::vector<int> label = component_labels(uf, p.vertices, &groups);
            Eigen::VectorXd a = space.project_ambient(groupwise_mean(x, label, groups));
            for (;;) {
                const Eigen::VectorXd g = gradient_apply(p, a);
                const double tol = kSupportTol * std::max(1.0, g.size() ? g.cwiseAbs().maxCoeff() : 0.0);
                int nnz = 0;
                int smallest = -1;
                double smallest_mag = 0.0;
                for (int e = 0; e < g.size(); ++e) {
                    const double m = std::abs(g(e));
                    if (m > tol) {
                        ++nnz;
                        if (smallest < 0 || m < smallest_mag) {
                            smallest = e;
                            smallest_mag = m;
                        }
                    }
                }
                if (nnz <= k || smallest < 0) break;
                uf.unite(p.edges[smallest].first, p.edges[smallest].second);
                label = component_labels(uf, p.vertices, &groups);
                a = space.project_ambient(groupwise_mean(x, label, groups));
            }
            return a;
        }
        case SignalModel::low_rank: {
            const auto& p = space.low_rank_params();
            const SvdResult svd = jacobi_svd(space.to_matrix(x));
            const int kc = std::min(k, static_cast<int>(svd.singular_values.size()));
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p.rows, p.cols);
            for (int i = 0; i < kc; ++i) {
                out += svd.singular_values(i) * svd.U.col(i) * svd.V.col(i).transpose();
            }
            return space.to_vector(out);
        }
    }
    return Eigen::VectorXd::Zero(x.size());
}

double gradient_operator_norm_bound(const GraphGradientParams& params) {
    return std::sqrt(2.0 * params.max_total_degree);
}

Eigen::VectorXd gradient_apply(const GraphGradientParams& params, const Eigen::VectorXd& x) {
    Eigen::VectorXd e(static_cast<Eigen::Index>(params.edges.size()));
    for (size_t k = 0; k < params.edges.size(); ++k) {
        e(static_cast<Eigen::Index>(k)) = x(params.edges[k].second) - x(params.edges[k].first);
    }
    return e;
}

Eigen::VectorXd gradient_adjoint(const GraphGradientParams& params, const Eigen::VectorXd& e) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(params.vertices);
    for (size_t k = 0; k < params.edges.size(); ++k) {
        x(params.edges[k].second) += e(static_cast<Eigen::Index>(k));
        x(params.edges[k].first) -= e(static_cast<Eigen::Index>(k));
    }
    return x;
}

}  // namespace rwplab
