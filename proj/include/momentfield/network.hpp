// Network configuration: populations, weights, rates, inputs, sizes, activations.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "momentfield/activation.hpp"

namespace mf {

// w(i, j) is the effect of population j on population i.
struct NetworkConfig {
    int M = 1;
    Eigen::VectorXd alpha;   // relaxation rates, all > 0
    Eigen::MatrixXd w;       // M x M effective weights
    Eigen::VectorXd inputs;  // I_i
    // Either discrete per-population sizes N_i, or the continuous parameter n = 1/N.
    Eigen::VectorXd sizes;  // empty when continuous
    double n = 0.0;         // used when sizes is empty; n >= 0, n = 0 means infinite
    std::vector<ActivationFunction> activation;  // one per population

    // Langevin noise prefactor is N_i^(-noise_exponent); the source terms of the
    // Rodriguez-Tuckwell moment system scale as the prefactor squared.
    double noise_exponent = 1.0;
    // Markov up-rate form: false = population rate N_i f(s_i), true = (N_i - n_i) f(s_i).
    bool per_quiescent_up_rate = false;

    bool discrete() const { return sizes.size() > 0; }
    // 1/N_i for population i (the continuous n when sizes are not given)
    double inv_size(int i) const { return discrete() ? 1.0 / sizes[i] : n; }

    const ActivationFunction& f(int i) const {
        return activation.size() == 1 ? activation.front() : activation.at(i);
    }

    void validate() const;

    NetworkConfig with_input(int i, double value) const {
        NetworkConfig c = *this;
        c.inputs[i] = value;
        return c;
    }
    NetworkConfig with_n(double value) const {
        NetworkConfig c = *this;
        c.sizes.resize(0);
        c.n = value;
        return c;
    }

    static NetworkConfig load(const std::string& path);
    static NetworkConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

// One-population helper used widely in tests and the Hopf analysis.
NetworkConfig one_population(double alpha, double w, double input, double N,
                             ActivationFunction f = ActivationFunction::logistic());

}  // namespace mf
