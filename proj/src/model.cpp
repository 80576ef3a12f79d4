#include "gala/model.hpp"

#include <string>

#include "gala/errors.hpp"
#include "gala/random.hpp"

namespace gala {

ClassifierParams init_params(std::size_t num_classes, std::size_t dim, double scale, std::uint64_t seed,
                             bool use_bias) {
    if (!(scale > 0.0)) throw ConfigError("init scale must be > 0");
    if (num_classes == 0 || dim == 0) throw ConfigError("init: K and d must be positive");
    ClassifierParams p;
    p.weights = Matrix(num_classes, dim);
    p.biases.assign(num_classes, 0.0);
    p.use_bias = use_bias;
    Rng rng(seed, Stream::init);
    for (double& w : p.weights.elements()) w = rng.uniform(-scale, scale);
    return p;
}

void logits_into(const ClassifierParams& params, std::span<const double> x, std::span<double> out) {
    if (x.size() != params.dim())
        throw DimensionError("logits: feature length " + std::to_string(x.size()) + " != d=" +
                             std::to_string(params.dim()));
    for (std::size_t j = 0; j < params.num_classes(); ++j) {
        out[j] = dot(params.weights.row(j), x);
        if (params.use_bias) out[j] += params.biases[j];
    }
}

Vector logits(const ClassifierParams& params, std::span<const double> x) {
    Vector z(params.num_classes());
    logits_into(params, x, z);
    return z;
}

Vector weight_norms(const ClassifierParams& params) {
    Vector norms(params.num_classes());
    for (std::size_t j = 0; j < norms.size(); ++j) norms[j] = l2_norm(params.weights.row(j));
    return norms;
}

nlohmann::json to_json(const ClassifierParams& params) {
    return {{"K", params.num_classes()},
            {"d", params.dim()},
            {"use_bias", params.use_bias},
            {"weights", params.weights.elements()},
            {"biases", params.biases}};
}

ClassifierParams params_from_json(const nlohmann::json& j) {
    try {
        ClassifierParams p;
        const auto K = j.at("K").get<std::size_t>();
        const auto d = j.at("d").get<std::size_t>();
        p.use_bias = j.at("use_bias").get<bool>();
        p.weights = Matrix(K, d, j.at("weights").get<std::vector<double>>());
        p.biases = j.at("biases").get<Vector>();
        if (p.biases.size() != K) throw DimensionError("checkpoint: biases length != K");
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("checkpoint: ") + e.what());
    }
}

}  // namespace gala
