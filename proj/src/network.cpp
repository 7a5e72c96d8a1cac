#include "momentfield/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "momentfield/errors.hpp"
#include "json.hpp"

namespace mf {

void NetworkConfig::validate() const {
    if (M < 1) throw ConfigError("M must be >= 1");
    if (alpha.size() != M || inputs.size() != M)
        throw ConfigError("alpha and inputs must have length M");
    if (w.rows() != M || w.cols() != M) throw ConfigError("w must be M x M");
    for (int i = 0; i < M; ++i)
        if (!(alpha[i] > 0)) throw ConfigError("all alpha_i must be > 0");
    if (discrete()) {
        if (sizes.size() != M) throw ConfigError("sizes must have length M");
        for (int i = 0; i < M; ++i)
            if (!(sizes[i] >= 1)) throw ConfigError("all N_i must be >= 1");
    } else if (!(n >= 0)) {
        throw ConfigError("continuous n must be >= 0");
    }
    if (activation.empty()) throw ConfigError("activation missing");
    if (activation.size() != 1 && static_cast<int>(activation.size()) != M)
        throw ConfigError("need one activation, or one per population");
}

namespace {

using nlohmann::json;

ActivationFunction activation_from_json(const json& a) {
    const std::string kind = a.at("kind").get<std::string>();
    double i0 = 0.0, p = 0.0;
    std::vector<double> tx, ty;
    if (a.contains("params")) {
        const auto& pr = a["params"];
        if (pr.contains("i0")) i0 = pr["i0"].get<double>();
        if (pr.contains("p")) p = pr["p"].get<double>();
        if (pr.contains("x")) tx = pr["x"].get<std::vector<double>>();
        if (pr.contains("y")) ty = pr["y"].get<std::vector<double>>();
    }
    return ActivationFunction::from_name(kind, i0, p, tx, ty);
}

json activation_to_json(const ActivationFunction& f) {
    json a;
    a["kind"] = f.kind_name();
    json pr = json::object();
    if (f.kind() == ActivationFunction::Kind::ShiftedTanh ||
        f.kind() == ActivationFunction::Kind::TanhHomotopy)
        pr["i0"] = f.i0();
    if (f.kind() == ActivationFunction::Kind::TanhHomotopy) pr["p"] = f.homotopy_p();
    if (!pr.empty()) a["params"] = pr;
    return a;
}

}  // namespace

NetworkConfig NetworkConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    NetworkConfig c;
    try {
        c.M = j.at("M").get<int>();
        const auto av = j.at("alpha").get<std::vector<double>>();
        c.alpha = Eigen::Map<const Eigen::VectorXd>(av.data(), av.size());
        const auto iv = j.at("I").get<std::vector<double>>();
        c.inputs = Eigen::Map<const Eigen::VectorXd>(iv.data(), iv.size());
        const auto wm = j.at("w").get<std::vector<std::vector<double>>>();
        c.w.resize(wm.size(), wm.empty() ? 0 : wm[0].size());
        for (std::size_t i = 0; i < wm.size(); ++i) {
            if (static_cast<int>(wm[i].size()) != c.w.cols())
                throw ConfigError("w rows have unequal lengths");
            for (std::size_t k = 0; k < wm[i].size(); ++k) c.w(i, k) = wm[i][k];
        }
        if (j.contains("N")) {
            const auto nv = j["N"].get<std::vector<double>>();
            c.sizes = Eigen::Map<const Eigen::VectorXd>(nv.data(), nv.size());
        } else if (j.contains("n")) {
            c.n = j["n"].get<double>();
        }
        if (j.contains("activation")) {
            c.activation.push_back(activation_from_json(j["activation"]));
        } else if (j.contains("activations")) {
            for (const auto& a : j["activations"]) c.activation.push_back(activation_from_json(a));
        }
        if (j.contains("noise_exponent")) {
            if (j["noise_exponent"].is_string())
                c.noise_exponent = std::numeric_limits<double>::infinity();
            else
                c.noise_exponent = j["noise_exponent"].get<double>();
        }
        if (j.contains("per_quiescent_up_rate"))
            c.per_quiescent_up_rate = j["per_quiescent_up_rate"].get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

NetworkConfig NetworkConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string NetworkConfig::to_json_text() const {
    json j;
    j["M"] = M;
    j["alpha"] = std::vector<double>(alpha.data(), alpha.data() + alpha.size());
    j["I"] = std::vector<double>(inputs.data(), inputs.data() + inputs.size());
    std::vector<std::vector<double>> wm(M, std::vector<double>(M));
    for (int i = 0; i < M; ++i)
        for (int k = 0; k < M; ++k) wm[i][k] = w(i, k);
    j["w"] = wm;
    if (discrete())
        j["N"] = std::vector<double>(sizes.data(), sizes.data() + sizes.size());
    else
        j["n"] = n;
    if (activation.size() == 1) {
        j["activation"] = activation_to_json(activation.front());
    } else {
        json arr = json::array();
        for (const auto& a : activation) arr.push_back(activation_to_json(a));
        j["activations"] = arr;
    }
    if (std::isfinite(noise_exponent) && noise_exponent != 1.0)
        j["noise_exponent"] = noise_exponent;
    if (!std::isfinite(noise_exponent)) j["noise_exponent"] = "inf";
    if (per_quiescent_up_rate) j["per_quiescent_up_rate"] = true;
    return j.dump(2);
}

NetworkConfig one_population(double alpha, double w, double input, double N,
                             ActivationFunction f) {
    NetworkConfig c;
    c.M = 1;
    c.alpha = Eigen::VectorXd::Constant(1, alpha);
    c.w = Eigen::MatrixXd::Constant(1, 1, w);
    c.inputs = Eigen::VectorXd::Constant(1, input);
    c.sizes = Eigen::VectorXd::Constant(1, N);
    c.activation.push_back(std::move(f));
    c.validate();
    return c;
}

}  // namespace mf
