#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "leodtn/rng.hpp"

namespace leodtn {

struct NetDims {
    int input = 50;
    int hidden1 = 64;
    int hidden2 = 64;
    int actions = 6;

    int param_count() const {
        return hidden1 * input + hidden1 + hidden2 * hidden1 + hidden2 + actions * hidden2 +
               actions + hidden2 + 1;
    }
};

/// Shared-trunk feedforward network, input -> h1 -> h2 (tanh) with a policy
/// head (action logits) and a value head on the trunk. Parameters live in one
/// flat vector in declared layer order (W1 b1 W2 b2 Wp bp Wv bv), which keeps
/// the optimizer, gradient clipping, checkpointing, and finite-difference
/// checks trivial.
class PolicyValueNet {
public:
    struct Output {
        std::vector<double> probs;
        double value = 0.0;
    };

    struct Sample {
        std::vector<double> obs;
        int action = 0;       // 0-based index
        double ret = 0.0;     // n-step return target
        double advantage = 0.0;
    };

    struct LossInfo {
        double policy_loss = 0.0;
        double value_loss = 0.0;
        double entropy = 0.0;
        double total = 0.0;
    };

    explicit PolicyValueNet(NetDims dims) : dims_(dims), params_(dims.param_count(), 0.0) {
        off_w1_ = 0;
        off_b1_ = off_w1_ + dims_.hidden1 * dims_.input;
        off_w2_ = off_b1_ + dims_.hidden1;
        off_b2_ = off_w2_ + dims_.hidden2 * dims_.hidden1;
        off_wp_ = off_b2_ + dims_.hidden2;
        off_bp_ = off_wp_ + dims_.actions * dims_.hidden2;
        off_wv_ = off_bp_ + dims_.actions;
        off_bv_ = off_wv_ + dims_.hidden2;
    }

    const NetDims& dims() const { return dims_; }
    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    /// Scaled orthogonal trunk, small policy head (near-uniform initial
    /// policy), unit-gain value head, zero biases.
    void init_weights(std::uint64_t seed) {
        RngStream rng = RngStream::derive(seed, {0x1417u});
        std::fill(params_.begin(), params_.end(), 0.0);
        orthogonal_fill(&params_[off_w1_], dims_.hidden1, dims_.input, std::sqrt(2.0), rng);
        orthogonal_fill(&params_[off_w2_], dims_.hidden2, dims_.hidden1, std::sqrt(2.0), rng);
        orthogonal_fill(&params_[off_wp_], dims_.actions, dims_.hidden2, 0.01, rng);
        orthogonal_fill(&params_[off_wv_], 1, dims_.hidden2, 1.0, rng);
    }

    Output forward(std::span<const double> obs) const {
        check_input(obs);
        std::vector<double> h1(dims_.hidden1), h2(dims_.hidden2), logits(dims_.actions);
        trunk(obs, h1, h2);
        heads(h2, logits);
        Output out;
        out.probs = softmax(logits);
        out.value = value_head(h2);
        return out;
    }

    LossInfo loss(std::span<const Sample> batch, double value_coef, double entropy_coef) const {
        return run_batch(batch, value_coef, entropy_coef, nullptr);
    }

    /// Analytic gradient of the A2C loss; advantages are treated as constants
    /// in the policy term.
    LossInfo loss_and_gradient(std::span<const Sample> batch, double value_coef,
                               double entropy_coef, std::vector<double>& grad) const {
        grad.assign(params_.size(), 0.0);
        return run_batch(batch, value_coef, entropy_coef, &grad);
    }

    static std::vector<double> softmax(const std::vector<double>& logits) {
        double m = logits[0];
        for (double z : logits) m = std::max(m, z);
        std::vector<double> p(logits.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < logits.size(); ++i) {
            p[i] = std::exp(logits[i] - m);
            sum += p[i];
        }
        for (double& x : p) x /= sum;
        return p;
    }

private:
    void check_input(std::span<const double> obs) const {
        if (static_cast<int>(obs.size()) != dims_.input)
            throw std::invalid_argument("forward: observation size mismatch");
        for (double x : obs)
            if (!std::isfinite(x)) throw std::invalid_argument("forward: non-finite observation");
    }

    void trunk(std::span<const double> x, std::vector<double>& h1, std::vector<double>& h2) const {
        const double* w1 = &params_[off_w1_];
        const double* b1 = &params_[off_b1_];
        for (int i = 0; i < dims_.hidden1; ++i) {
            double z = b1[i];
            const double* row = w1 + i * dims_.input;
            for (int j = 0; j < dims_.input; ++j) z += row[j] * x[j];
            h1[i] = std::tanh(z);
        }
        const double* w2 = &params_[off_w2_];
        const double* b2 = &params_[off_b2_];
        for (int i = 0; i < dims_.hidden2; ++i) {
            double z = b2[i];
            const double* row = w2 + i * dims_.hidden1;
            for (int j = 0; j < dims_.hidden1; ++j) z += row[j] * h1[j];
            h2[i] = std::tanh(z);
        }
    }

    void heads(const std::vector<double>& h2, std::vector<double>& logits) const {
        const double* wp = &params_[off_wp_];
        const double* bp = &params_[off_bp_];
        for (int i = 0; i < dims_.actions; ++i) {
            double z = bp[i];
            const double* row = wp + i * dims_.hidden2;
            for (int j = 0; j < dims_.hidden2; ++j) z += row[j] * h2[j];
            logits[i] = z;
        }
    }

    double value_head(const std::vector<double>& h2) const {
        const double* wv = &params_[off_wv_];
        double v = params_[off_bv_];
        for (int j = 0; j < dims_.hidden2; ++j) v += wv[j] * h2[j];
        return v;
    }

    LossInfo run_batch(std::span<const Sample> batch, double value_coef, double entropy_coef,
                       std::vector<double>* grad) const {
        if (batch.empty()) throw std::invalid_argument("loss: empty batch");
        const double inv_b = 1.0 / static_cast<double>(batch.size());
        LossInfo info;

        std::vector<double> h1(dims_.hidden1), h2(dims_.hidden2), logits(dims_.actions);
        std::vector<double> dlogits(dims_.actions), dh2(dims_.hidden2), dh1(dims_.hidden1);

        for (const Sample& s : batch) {
            check_input(s.obs);
            trunk(s.obs, h1, h2);
            heads(h2, logits);
            std::vector<double> probs = softmax(logits);
            double v = value_head(h2);

            double logp = std::log(std::max(probs[s.action], 1e-300));
            double entropy = 0.0;
            for (double p : probs)
                if (p > 0.0) entropy -= p * std::log(p);
            double td = s.ret - v;

            info.policy_loss += -logp * s.advantage * inv_b;
            info.value_loss += td * td * inv_b;
            info.entropy += entropy * inv_b;

            if (!grad) continue;
            std::vector<double>& g = *grad;

            // d total / d logit_k:
            //   policy     (p_k - 1{k=a}) * advantage / B
            //   -ce * H    ce * p_k * (log p_k + H) / B
            for (int k = 0; k < dims_.actions; ++k) {
                double dpol = (probs[k] - (k == s.action ? 1.0 : 0.0)) * s.advantage;
                double dent = entropy_coef * probs[k] * (std::log(std::max(probs[k], 1e-300)) + entropy);
                dlogits[k] = (dpol + dent) * inv_b;
            }
            double dv = -2.0 * value_coef * td * inv_b;

            for (int k = 0; k < dims_.actions; ++k) {
                double* grow = &g[off_wp_ + k * dims_.hidden2];
                for (int j = 0; j < dims_.hidden2; ++j) grow[j] += dlogits[k] * h2[j];
                g[off_bp_ + k] += dlogits[k];
            }
            for (int j = 0; j < dims_.hidden2; ++j) g[off_wv_ + j] += dv * h2[j];
            g[off_bv_] += dv;

            const double* wp = &params_[off_wp_];
            const double* wv = &params_[off_wv_];
            for (int j = 0; j < dims_.hidden2; ++j) {
                double acc = dv * wv[j];
                for (int k = 0; k < dims_.actions; ++k) acc += dlogits[k] * wp[k * dims_.hidden2 + j];
                dh2[j] = acc * (1.0 - h2[j] * h2[j]);  // through tanh
            }
            const double* w2 = &params_[off_w2_];
            for (int j = 0; j < dims_.hidden1; ++j) {
                double acc = 0.0;
                for (int i = 0; i < dims_.hidden2; ++i) acc += dh2[i] * w2[i * dims_.hidden1 + j];
                dh1[j] = acc * (1.0 - h1[j] * h1[j]);
            }
            for (int i = 0; i < dims_.hidden2; ++i) {
                double* grow = &g[off_w2_ + i * dims_.hidden1];
                for (int j = 0; j < dims_.hidden1; ++j) grow[j] += dh2[i] * h1[j];
                g[off_b2_ + i] += dh2[i];
            }
            for (int i = 0; i < dims_.hidden1; ++i) {
                double* grow = &g[off_w1_ + i * dims_.input];
                for (int j = 0; j < dims_.input; ++j) grow[j] += dh1[i] * s.obs[j];
                g[off_b1_ + i] += dh1[i];
            }
        }

        info.total = info.policy_loss + value_coef * info.value_loss - entropy_coef * info.entropy;
        return info;
    }

    // Orthogonal-ish init: Gaussian fill, then modified Gram-Schmidt on the
    // shorter side, scaled by gain.
    static void orthogonal_fill(double* w, int rows, int cols, double gain, RngStream& rng) {
        for (int i = 0; i < rows * cols; ++i) w[i] = rng.normal();
        auto at = [&](int r, int c) -> double& { return w[r * cols + c]; };
        if (rows <= cols) {
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < i; ++j) {
                    double proj = 0.0;
                    for (int c = 0; c < cols; ++c) proj += at(i, c) * at(j, c);
                    for (int c = 0; c < cols; ++c) at(i, c) -= proj * at(j, c);
                }
                double norm = 0.0;
                for (int c = 0; c < cols; ++c) norm += at(i, c) * at(i, c);
                norm = std::sqrt(norm);
                for (int c = 0; c < cols; ++c) at(i, c) /= norm;
            }
        } else {
            for (int i = 0; i < cols; ++i) {
                for (int j = 0; j < i; ++j) {
                    double proj = 0.0;
                    for (int r = 0; r < rows; ++r) proj += at(r, i) * at(r, j);
                    for (int r = 0; r < rows; ++r) at(r, i) -= proj * at(r, j);
                }
                double norm = 0.0;
                for (int r = 0; r < rows; ++r) norm += at(r, i) * at(r, i);
                norm = std::sqrt(norm);
                for (int r = 0; r < rows; ++r) at(r, i) /= norm;
            }
        }
        for (int i = 0; i < rows * cols; ++i) w[i] *= gain;
    }

    NetDims dims_;
    std::vector<double> params_;
    int off_w1_, off_b1_, off_w2_, off_b2_, off_wp_, off_bp_, off_wv_, off_bv_;
};

}  // namespace leodtn
