#include "graphon/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "graphon/errors.hpp"

namespace graphon {

Activation activation_from_string(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "linear") return Activation::Linear;
    throw ConfigError("unknown activation: " + name);
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Linear: return "linear";
    }
    return "?";
}

int MlpSpec::fan_in(int layer) const {
    return layer == 0 ? input_dim : hidden_widths[layer - 1];
}

int MlpSpec::fan_out(int layer) const {
    return layer == layer_count() - 1 ? output_dim : hidden_widths[layer];
}

std::size_t MlpSpec::parameter_count() const {
    std::size_t n = 0;
    for (int l = 0; l < layer_count(); ++l)
        n += static_cast<std::size_t>(fan_in(l) + 1) * static_cast<std::size_t>(fan_out(l));
    return n;
}

void MlpSpec::validate() const {
    if (input_dim < 1 || output_dim < 1) throw ConfigError("MlpSpec: dims must be >= 1");
    if (hidden_widths.empty()) throw ConfigError("MlpSpec: at least one hidden layer required");
    for (int w : hidden_widths)
        if (w < 1) throw ConfigError("MlpSpec: hidden widths must be >= 1");
}

namespace {

void apply_activation(Activation a, Eigen::MatrixXd& m) {
    switch (a) {
        case Activation::Tanh:
            m = m.array().tanh();
            break;
        case Activation::Relu:
            m = m.array().max(0.0);
            break;
        case Activation::Sigmoid:
            m = (1.0 / (1.0 + (-m.array()).exp()));
            break;
        case Activation::Linear:
            break;
    }
}

// Derivative expressed through the post-activation value.
Eigen::ArrayXXd activation_deriv(Activation a, const Eigen::MatrixXd& post) {
    switch (a) {
        case Activation::Tanh: return 1.0 - post.array().square();
        case Activation::Relu: return (post.array() > 0.0).cast<double>();
        case Activation::Sigmoid: return post.array() * (1.0 - post.array());
        case Activation::Linear: break;
    }
    return Eigen::ArrayXXd::Ones(post.rows(), post.cols());
}

}  // namespace

void MlpGrad::setZero() {
    for (auto& w : dw) w.setZero();
    for (auto& b : db) b.setZero();
}

void MlpGrad::accumulate(const MlpGrad& other) {
    for (std::size_t l = 0; l < dw.size(); ++l) {
        dw[l] += other.dw[l];
        db[l] += other.db[l];
    }
}

double MlpGrad::max_abs() const {
    double m = 0.0;
    for (const auto& w : dw) m = std::max(m, w.cwiseAbs().maxCoeff());
    for (const auto& b : db) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
}

bool MlpGrad::all_finite() const {
    for (const auto& w : dw)
        if (!w.allFinite()) return false;
    for (const auto& b : db)
        if (!b.allFinite()) return false;
    return true;
}

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    for (int l = 0; l < spec_.layer_count(); ++l) {
        weights_.push_back(Eigen::MatrixXd::Zero(spec_.fan_out(l), spec_.fan_in(l)));
        biases_.push_back(Eigen::VectorXd::Zero(spec_.fan_out(l)));
    }
}

Mlp Mlp::glorot(const MlpSpec& spec, std::mt19937_64& rng) {
    Mlp net(spec);
    for (int l = 0; l < spec.layer_count(); ++l) {
        const double bound = std::sqrt(6.0 / (spec.fan_in(l) + spec.fan_out(l)));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (int r = 0; r < net.weights_[l].rows(); ++r)
            for (int c = 0; c < net.weights_[l].cols(); ++c) net.weights_[l](r, c) = dist(rng);
    }
    return net;
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& x, MlpCache* cache) const {
    if (x.rows() != spec_.input_dim)
        throw ShapeError("Mlp::forward: input has " + std::to_string(x.rows()) +
                         " rows, expected " + std::to_string(spec_.input_dim));
    if (cache) {
        cache->input = x;
        cache->post.clear();
        cache->post.reserve(weights_.size());
    }
    Eigen::MatrixXd h = x;
    const int L = spec_.layer_count();
    for (int l = 0; l < L; ++l) {
        Eigen::MatrixXd a = weights_[l] * h;
        a.colwise() += biases_[l];
        apply_activation(l == L - 1 ? spec_.output_activation : spec_.hidden_activation, a);
        h = std::move(a);
        if (cache) cache->post.push_back(h);
    }
    return h;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
    return forward_batch(x).col(0);
}

MlpGrad Mlp::zero_grad() const {
    MlpGrad g;
    for (int l = 0; l < spec_.layer_count(); ++l) {
        g.dw.push_back(Eigen::MatrixXd::Zero(spec_.fan_out(l), spec_.fan_in(l)));
        g.db.push_back(Eigen::VectorXd::Zero(spec_.fan_out(l)));
    }
    return g;
}

MlpGrad Mlp::backward_batch(const MlpCache& cache, const Eigen::MatrixXd& upstream,
                            Eigen::MatrixXd* input_grad) const {
    MlpGrad g = zero_grad();
    backward_batch_into(cache, upstream, g, input_grad);
    return g;
}

void Mlp::backward_batch_into(const MlpCache& cache, const Eigen::MatrixXd& upstream,
                              MlpGrad& grad, Eigen::MatrixXd* input_grad) const {
    const int L = spec_.layer_count();
    if (upstream.rows() != spec_.output_dim || upstream.cols() != cache.input.cols())
        throw ShapeError("Mlp::backward: upstream shape mismatch");
    if (static_cast<int>(cache.post.size()) != L)
        throw ShapeError("Mlp::backward: cache does not match network depth");

    // delta = dL/d(pre-activation) of the current layer.
    Eigen::MatrixXd delta =
        upstream.array() * activation_deriv(spec_.output_activation, cache.post[L - 1]);
    for (int l = L - 1; l >= 0; --l) {
        const Eigen::MatrixXd& below = l == 0 ? cache.input : cache.post[l - 1];
        grad.dw[l].noalias() += delta * below.transpose();
        grad.db[l] += delta.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = weights_[l].transpose() * delta;
            delta = back.array() * activation_deriv(spec_.hidden_activation, cache.post[l - 1]);
        } else if (input_grad) {
            input_grad->noalias() = weights_[0].transpose() * delta;
        }
    }
}

bool Mlp::all_finite() const {
    for (const auto& w : weights_)
        if (!w.allFinite()) return false;
    for (const auto& b : biases_)
        if (!b.allFinite()) return false;
    return true;
}

std::size_t Mlp::flat_size() const { return spec_.parameter_count(); }

double Mlp::get_flat(std::size_t idx) const {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const std::size_t wn = static_cast<std::size_t>(weights_[l].size());
        if (idx < wn) return weights_[l].data()[idx];
        idx -= wn;
        const std::size_t bn = static_cast<std::size_t>(biases_[l].size());
        if (idx < bn) return biases_[l](static_cast<Eigen::Index>(idx));
        idx -= bn;
    }
    throw ShapeError("Mlp::get_flat: index out of range");
}

void Mlp::set_flat(std::size_t idx, double value) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const std::size_t wn = static_cast<std::size_t>(weights_[l].size());
        if (idx < wn) {
            weights_[l].data()[idx] = value;
            return;
        }
        idx -= wn;
        const std::size_t bn = static_cast<std::size_t>(biases_[l].size());
        if (idx < bn) {
            biases_[l](static_cast<Eigen::Index>(idx)) = value;
            return;
        }
        idx -= bn;
    }
    throw ShapeError("Mlp::set_flat: index out of range");
}

double Mlp::grad_flat(const MlpGrad& g, std::size_t idx) const {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const std::size_t wn = static_cast<std::size_t>(weights_[l].size());
        if (idx < wn) return g.dw[l].data()[idx];
        idx -= wn;
        const std::size_t bn = static_cast<std::size_t>(biases_[l].size());
        if (idx < bn) return g.db[l](static_cast<Eigen::Index>(idx));
        idx -= bn;
    }
    throw ShapeError("Mlp::grad_flat: index out of range");
}

AdamState AdamState::init(const Mlp& params, const AdamConfig& cfg) {
    AdamState s;
    s.cfg = cfg;
    s.m = params.zero_grad();
    s.v = params.zero_grad();
    return s;
}

void adam_step(Mlp& params, const MlpGrad& grad, AdamState& state) {
    const int L = params.spec().layer_count();
    for (int l = 0; l < L; ++l) {
        if (!grad.dw[l].allFinite() || !grad.db[l].allFinite())
            throw NumericError("adam_step: non-finite gradient in layer " + std::to_string(l));
    }
    state.step += 1;
    const auto& c = state.cfg;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
    for (int l = 0; l < L; ++l) {
        state.m.dw[l] = c.beta1 * state.m.dw[l] + (1.0 - c.beta1) * grad.dw[l];
        state.v.dw[l] = c.beta2 * state.v.dw[l].array() + (1.0 - c.beta2) * grad.dw[l].array().square();
        params.weight(l).array() -=
            c.learning_rate * (state.m.dw[l].array() / bc1) /
            ((state.v.dw[l].array() / bc2).sqrt() + c.epsilon);

        state.m.db[l] = c.beta1 * state.m.db[l] + (1.0 - c.beta1) * grad.db[l];
        state.v.db[l] = c.beta2 * state.v.db[l].array() + (1.0 - c.beta2) * grad.db[l].array().square();
        params.bias(l).array() -=
            c.learning_rate * (state.m.db[l].array() / bc1) /
            ((state.v.db[l].array() / bc2).sqrt() + c.epsilon);
    }
    if (!params.all_finite()) throw NumericError("adam_step: parameters became non-finite");
}

namespace {

constexpr char kMagic[4] = {'G', 'M', 'L', 'P'};
constexpr std::uint32_t kFormatVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError("checkpoint: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw IoError("checkpoint: truncated data");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void save_networks(std::ostream& out, const std::vector<Mlp>& nets) {
    out.write(kMagic, 4);
    write_u32(out, kFormatVersion);
    write_u32(out, static_cast<std::uint32_t>(nets.size()));
    for (const auto& net : nets) {
        const auto& s = net.spec();
        write_u32(out, net.version());
        write_u32(out, static_cast<std::uint32_t>(s.input_dim));
        write_u32(out, static_cast<std::uint32_t>(s.output_dim));
        write_u32(out, static_cast<std::uint32_t>(s.hidden_widths.size()));
        for (int w : s.hidden_widths) write_u32(out, static_cast<std::uint32_t>(w));
        write_u32(out, static_cast<std::uint32_t>(s.hidden_activation));
        write_u32(out, static_cast<std::uint32_t>(s.output_activation));
        for (int l = 0; l < s.layer_count(); ++l) {
            const auto& w = net.weight(l);
            for (Eigen::Index r = 0; r < w.rows(); ++r)
                for (Eigen::Index c = 0; c < w.cols(); ++c) write_f64(out, w(r, c));
            const auto& b = net.bias(l);
            for (Eigen::Index r = 0; r < b.size(); ++r) write_f64(out, b(r));
        }
    }
    if (!out) throw IoError("checkpoint: write failed");
}

std::vector<Mlp> load_networks(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw IoError("checkpoint: bad magic");
    const std::uint32_t version = read_u32(in);
    if (version != kFormatVersion)
        throw IoError("checkpoint: unsupported format version " + std::to_string(version));
    const std::uint32_t count = read_u32(in);
    std::vector<Mlp> nets;
    nets.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        MlpSpec s;
        read_u32(in);  // network version tag, currently always 1
        s.input_dim = static_cast<int>(read_u32(in));
        s.output_dim = static_cast<int>(read_u32(in));
        const std::uint32_t depth = read_u32(in);
        s.hidden_widths.clear();
        for (std::uint32_t l = 0; l < depth; ++l)
            s.hidden_widths.push_back(static_cast<int>(read_u32(in)));
        s.hidden_activation = static_cast<Activation>(read_u32(in));
        s.output_activation = static_cast<Activation>(read_u32(in));
        Mlp net(s);
        for (int l = 0; l < s.layer_count(); ++l) {
            auto& w = net.weight(l);
            for (Eigen::Index r = 0; r < w.rows(); ++r)
                for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = read_f64(in);
            auto& b = net.bias(l);
            for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = read_f64(in);
        }
        nets.push_back(std::move(net));
    }
    return nets;
}

void save_networks_file(const std::string& path, const std::vector<Mlp>& nets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);
    save_networks(out, nets);
}

std::vector<Mlp> load_networks_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    return load_networks(in);
}

}  // namespace graphon
