#include "salsa/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace salsa {

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector vector_from_json(const json& arr) {
    Vector v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) v[static_cast<long>(i)] = arr[i].get<double>();
    return v;
}

const char* variant_name(KernelVariant v) {
    return v == KernelVariant::ExactOrder ? "exact-order" : "all-orders-up-to";
}

KernelVariant variant_from_name(const std::string& name) {
    if (name == "exact-order") return KernelVariant::ExactOrder;
    if (name == "all-orders-up-to") return KernelVariant::AllOrdersUpTo;
    throw ValidationError("model document: unknown kernel variant '" + name + "'");
}

}  // namespace

std::string model_to_json(const FittedSalsa& model) {
    json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["d"] = model.spec().order();
    doc["lambda"] = model.lambda();
    doc["c"] = model.bandwidth_multiplier();
    doc["variant"] = variant_name(model.spec().variant());
    doc["bandwidths"] = vector_to_json(model.spec().bandwidths());
    doc["sigma_y"] = model.spec().scale();
    doc["normalization"] = {
        {"means", vector_to_json(model.normalization().means)},
        {"sds", vector_to_json(model.normalization().sds)},
        {"y_mean", model.normalization().y_mean},
        {"y_sd", model.normalization().y_sd},
    };
    doc["alpha"] = vector_to_json(model.alpha());

    const Matrix& x = model.x_train();
    json rowmajor = json::array();
    for (long i = 0; i < x.rows(); ++i) {
        for (long j = 0; j < x.cols(); ++j) rowmajor.push_back(x(i, j));
    }
    doc["X_train"] = {{"rows", x.rows()}, {"cols", x.cols()}, {"data", std::move(rowmajor)}};
    doc["jitter"] = model.jitter();
    doc["training_mse"] = model.training_mse();
    return doc.dump(2);
}

FittedSalsa model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("model document: ") + err.what());
    }
    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
        throw ValidationError("model document: missing format_version");
    }
    if (doc["format_version"].get<int>() != kModelFormatVersion) {
        throw ValidationError("model document: unsupported format_version");
    }

    try {
        const int order = doc.at("d").get<int>();
        const double lambda = doc.at("lambda").get<double>();
        const double c = doc.at("c").get<double>();
        const KernelVariant variant = variant_from_name(doc.at("variant").get<std::string>());
        Vector bandwidths = vector_from_json(doc.at("bandwidths"));
        const double sigma_y = doc.at("sigma_y").get<double>();

        const json& norm = doc.at("normalization");
        NormalizationStats stats;
        stats.means = vector_from_json(norm.at("means"));
        stats.sds = vector_from_json(norm.at("sds"));
        stats.y_mean = norm.at("y_mean").get<double>();
        stats.y_sd = norm.at("y_sd").get<double>();

        Vector alpha = vector_from_json(doc.at("alpha"));

        const json& xt = doc.at("X_train");
        const long rows = xt.at("rows").get<long>();
        const long cols = xt.at("cols").get<long>();
        const json& data = xt.at("data");
        if (static_cast<long>(data.size()) != rows * cols) {
            throw ValidationError("model document: X_train size mismatch");
        }
        Matrix x(rows, cols);
        size_t k = 0;
        for (long i = 0; i < rows; ++i) {
            for (long j = 0; j < cols; ++j) x(i, j) = data[k++].get<double>();
        }
        if (alpha.size() != rows) {
            throw ValidationError("model document: alpha length does not match X_train");
        }

        EspKernelSpec spec(order, std::move(bandwidths), sigma_y, variant);
        const double jitter = doc.at("jitter").get<double>();
        const double training_mse = doc.at("training_mse").get<double>();
        return FittedSalsa(std::move(alpha), std::move(x), std::move(spec), lambda, c,
                           std::move(stats), jitter, training_mse);
    } catch (const json::exception& err) {
        throw ValidationError(std::string("model document: ") + err.what());
    }
}

void save_model(const std::string& path, const FittedSalsa& model) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << model_to_json(model) << "\n";
}

FittedSalsa load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

}  // namespace salsa
