#ifndef GRAPHON_KERNELS_HPP
#define GRAPHON_KERNELS_HPP

#include <Eigen/Core>
#include <random>
#include <string>
#include <vector>

namespace graphon {

enum class GraphonKind { Constant, TwoBlock, Star, MinMax, PowerLaw };

GraphonKind graphon_kind_from_string(const std::string& name);
std::string to_string(GraphonKind k);

/// One of the five interaction kernels on [0,1]^2, immutable once built.
///
/// Block boundaries are half-open: TwoBlock splits at [0,1/2) vs [1/2,1],
/// Star at [0,alpha) vs [alpha,1].
class GraphonKernel {
public:
    static GraphonKernel constant();
    static GraphonKernel two_block(double a, double b);
    static GraphonKernel star(double c, double alpha);
    static GraphonKernel min_max();
    static GraphonKernel power_law(double gamma = -0.5);

    GraphonKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double alpha() const { return alpha_; }
    double gamma() const { return gamma_; }

    /// Kernel value at (u,v). Throws DomainError for labels outside [0,1].
    double eval(double u, double v) const;

    /// Analytic degree: the integral of eval(u,.) over [0,1].
    double degree(double u) const;

    /// [eval(u, v_j)] for every label in `labels`.
    Eigen::VectorXd mean_field_weights(double u, const Eigen::VectorXd& labels) const;

    /// Full weight matrix eval(u_i, u_j) for a batch of labels.
    Eigen::MatrixXd weight_matrix(const Eigen::VectorXd& labels) const;

    /// Symmetric 0/1 adjacency with lambda_ij ~ Bernoulli(eval(i/n, j/n)),
    /// one draw per unordered pair (diagonal included).
    Eigen::MatrixXi sample_adjacency(int n, std::mt19937_64& rng) const;

private:
    GraphonKind kind_ = GraphonKind::Constant;
    double a_ = 1.0, b_ = 1.0;         // TwoBlock
    double c_ = 1.0, alpha_ = 0.5;     // Star
    double gamma_ = -0.5;              // PowerLaw
};

}  // namespace graphon

#endif
