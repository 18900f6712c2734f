#include "graphon/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "graphon/errors.hpp"

namespace graphon {

GraphonKind graphon_kind_from_string(const std::string& name) {
    if (name == "constant") return GraphonKind::Constant;
    if (name == "two_block") return GraphonKind::TwoBlock;
    if (name == "star") return GraphonKind::Star;
    if (name == "min_max") return GraphonKind::MinMax;
    if (name == "power_law") return GraphonKind::PowerLaw;
    throw ConfigError("unknown graphon kind: " + name);
}

std::string to_string(GraphonKind k) {
    switch (k) {
        case GraphonKind::Constant: return "constant";
        case GraphonKind::TwoBlock: return "two_block";
        case GraphonKind::Star: return "star";
        case GraphonKind::MinMax: return "min_max";
        case GraphonKind::PowerLaw: return "power_law";
    }
    return "?";
}

GraphonKernel GraphonKernel::constant() {
    GraphonKernel g;
    g.kind_ = GraphonKind::Constant;
    return g;
}

GraphonKernel GraphonKernel::two_block(double a, double b) {
    if (a < 0.0 || b < 0.0) throw ConfigError("two_block: a, b must be >= 0");
    GraphonKernel g;
    g.kind_ = GraphonKind::TwoBlock;
    g.a_ = a;
    g.b_ = b;
    return g;
}

GraphonKernel GraphonKernel::star(double c, double alpha) {
    if (c < 0.0) throw ConfigError("star: c must be >= 0");
    if (alpha <= 0.0 || alpha >= 1.0) throw ConfigError("star: alpha must lie in (0,1)");
    GraphonKernel g;
    g.kind_ = GraphonKind::Star;
    g.c_ = c;
    g.alpha_ = alpha;
    return g;
}

GraphonKernel GraphonKernel::min_max() {
    GraphonKernel g;
    g.kind_ = GraphonKind::MinMax;
    return g;
}

GraphonKernel GraphonKernel::power_law(double gamma) {
    // gamma > 0 makes (uv)^-gamma unbounded at the origin.
    if (gamma > 0.0) throw ConfigError("power_law: gamma must be <= 0");
    GraphonKernel g;
    g.kind_ = GraphonKind::PowerLaw;
    g.gamma_ = gamma;
    return g;
}

namespace {
void check_label(double u, const char* who) {
    if (!(u >= 0.0 && u <= 1.0))
        throw DomainError(std::string(who) + ": label " + std::to_string(u) + " outside [0,1]");
}
}  // namespace

double GraphonKernel::eval(double u, double v) const {
    check_label(u, "GraphonKernel::eval");
    check_label(v, "GraphonKernel::eval");
    switch (kind_) {
        case GraphonKind::Constant:
            return 1.0;
        case GraphonKind::TwoBlock: {
            const bool lu = u < 0.5, lv = v < 0.5;
            if (lu && lv) return a_;
            if (!lu && !lv) return b_;
            return 0.0;
        }
        case GraphonKind::Star: {
            const bool mu = u < alpha_, mv = v < alpha_;
            return mu != mv ? c_ : 0.0;
        }
        case GraphonKind::MinMax:
            return std::min(u, v) * (1.0 - std::max(u, v));
        case GraphonKind::PowerLaw:
            if (u == 0.0 || v == 0.0) return gamma_ == 0.0 ? 1.0 : 0.0;  // limit value
            return std::pow(u * v, -gamma_);
    }
    throw ConfigError("GraphonKernel::eval: bad kind");
}

double GraphonKernel::degree(double u) const {
    check_label(u, "GraphonKernel::degree");
    switch (kind_) {
        case GraphonKind::Constant:
            return 1.0;
        case GraphonKind::TwoBlock:
            return u < 0.5 ? a_ / 2.0 : b_ / 2.0;
        case GraphonKind::Star:
            return u < alpha_ ? c_ * (1.0 - alpha_) : c_ * alpha_;
        case GraphonKind::MinMax:
            // int_0^u v(1-u) dv + int_u^1 u(1-v) dv
            return u * (1.0 - u) / 2.0;
        case GraphonKind::PowerLaw:
            // int_0^1 (uv)^-gamma dv = u^-gamma / (1 - gamma)
            return std::pow(u, -gamma_) / (1.0 - gamma_);
    }
    throw ConfigError("GraphonKernel::degree: bad kind");
}

Eigen::VectorXd GraphonKernel::mean_field_weights(double u, const Eigen::VectorXd& labels) const {
    Eigen::VectorXd w(labels.size());
    for (Eigen::Index j = 0; j < labels.size(); ++j) w(j) = eval(u, labels(j));
    return w;
}

Eigen::MatrixXd GraphonKernel::weight_matrix(const Eigen::VectorXd& labels) const {
    const Eigen::Index m = labels.size();
    Eigen::MatrixXd w(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        w(i, i) = eval(labels(i), labels(i));
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double g = eval(labels(i), labels(j));
            w(i, j) = g;
            w(j, i) = g;
        }
    }
    return w;
}

Eigen::MatrixXi GraphonKernel::sample_adjacency(int n, std::mt19937_64& rng) const {
    if (n < 1) throw ConfigError("sample_adjacency: n must be >= 1");
    Eigen::MatrixXi lambda = Eigen::MatrixXi::Zero(n, n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double p = eval(static_cast<double>(i + 1) / n, static_cast<double>(j + 1) / n);
            const int draw = unif(rng) < p ? 1 : 0;
            lambda(i, j) = draw;
            lambda(j, i) = draw;
        }
    }
    return lambda;
}

}  // namespace graphon
