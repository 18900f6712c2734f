#ifndef GRAPHON_MLP_HPP
#define GRAPHON_MLP_HPP

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace graphon {

enum class Activation { Tanh, Relu, Sigmoid, Linear };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

/// Layer structure of a fully connected feedforward network.
struct MlpSpec {
    int input_dim = 1;
    std::vector<int> hidden_widths = {64, 64, 64};
    int output_dim = 1;
    Activation hidden_activation = Activation::Tanh;
    Activation output_activation = Activation::Linear;

    int layer_count() const { return static_cast<int>(hidden_widths.size()) + 1; }
    int fan_in(int layer) const;
    int fan_out(int layer) const;
    std::size_t parameter_count() const;
    void validate() const;

    bool operator==(const MlpSpec&) const = default;
};

/// Per-layer post-activation values recorded by a batched forward pass,
/// consumed by the matching backward pass.
struct MlpCache {
    Eigen::MatrixXd input;                // input_dim x batch
    std::vector<Eigen::MatrixXd> post;    // fan_out(l) x batch per layer
};

/// Gradients (or Adam moments) with the same shapes as the network parameters.
struct MlpGrad {
    std::vector<Eigen::MatrixXd> dw;
    std::vector<Eigen::VectorXd> db;

    void setZero();
    void accumulate(const MlpGrad& other);
    double max_abs() const;
    bool all_finite() const;
};

/// A fully connected network together with its weights; the trainable object.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(MlpSpec spec);  // zero-initialized

    static Mlp glorot(const MlpSpec& spec, std::mt19937_64& rng);

    const MlpSpec& spec() const { return spec_; }
    std::uint32_t version() const { return version_; }

    Eigen::MatrixXd& weight(int layer) { return weights_[layer]; }
    const Eigen::MatrixXd& weight(int layer) const { return weights_[layer]; }
    Eigen::VectorXd& bias(int layer) { return biases_[layer]; }
    const Eigen::VectorXd& bias(int layer) const { return biases_[layer]; }

    /// Batched evaluation; columns are samples. Records activations into
    /// `cache` when given.
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x, MlpCache* cache = nullptr) const;

    Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

    /// Exact reverse-mode gradient of <upstream, forward(x)> summed over the
    /// batch. Writes the gradient w.r.t. the input into `input_grad` when
    /// requested.
    MlpGrad backward_batch(const MlpCache& cache, const Eigen::MatrixXd& upstream,
                           Eigen::MatrixXd* input_grad = nullptr) const;

    /// Same, accumulating into an existing gradient (fixed-order reduction).
    void backward_batch_into(const MlpCache& cache, const Eigen::MatrixXd& upstream,
                             MlpGrad& grad, Eigen::MatrixXd* input_grad = nullptr) const;

    MlpGrad zero_grad() const;
    bool all_finite() const;
    std::size_t parameter_count() const { return spec_.parameter_count(); }

    // Flat parameter access, used by finite-difference test oracles.
    std::size_t flat_size() const;
    double get_flat(std::size_t idx) const;
    void set_flat(std::size_t idx, double value);
    double grad_flat(const MlpGrad& g, std::size_t idx) const;

private:
    MlpSpec spec_;
    std::uint32_t version_ = 1;
    std::vector<Eigen::MatrixXd> weights_;  // fan_out x fan_in
    std::vector<Eigen::VectorXd> biases_;
};

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First/second moment accumulators for one network.
struct AdamState {
    AdamConfig cfg;
    long step = 0;
    MlpGrad m;
    MlpGrad v;

    static AdamState init(const Mlp& params, const AdamConfig& cfg);
};

/// One bias-corrected Adam update in place. Throws NumericError on
/// non-finite gradient entries, naming the offending layer.
void adam_step(Mlp& params, const MlpGrad& grad, AdamState& state);

// Checkpoint container: "GMLP" magic, format version, per-network spec
// header, then row-major weights and biases as 64-bit little-endian floats.
void save_networks(std::ostream& out, const std::vector<Mlp>& nets);
std::vector<Mlp> load_networks(std::istream& in);
void save_networks_file(const std::string& path, const std::vector<Mlp>& nets);
std::vector<Mlp> load_networks_file(const std::string& path);

}  // namespace graphon

#endif
