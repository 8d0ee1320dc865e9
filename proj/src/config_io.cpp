#include "zofo/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zofo/errors.hpp"

namespace zofo {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
    return entries;
}

Eigen::MatrixXd matrix_from_json(const json& entries, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& name) {
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows * cols) {
        throw ConfigError("config: field " + name + " must hold " +
                          std::to_string(rows * cols) + " entries");
    }
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = entries[k++].get<double>();
    return m;
}

Eigen::VectorXd vector_from_json(const json& entries, Eigen::Index size,
                                 const std::string& name) {
    return matrix_from_json(entries, size, 1, name).col(0);
}

} // namespace

std::string instance_to_json(const InstanceConfig& instance) {
    const PlantModel& plant = instance.plant;
    const auto& d = plant.dims();
    json j;
    j["plant"] = {
        {"seed", plant.seed},
        {"dims", {{"n", d.n}, {"p", d.p}, {"q", d.q}, {"r", d.r}}},
        {"a_norm", plant.a_norm},
        {"f_norm", plant.f_norm},
        {"A", matrix_to_json(plant.A())},
        {"B", matrix_to_json(plant.B())},
        {"C", matrix_to_json(plant.C())},
        {"D", matrix_to_json(plant.D())},
        {"E", matrix_to_json(plant.E())},
        {"F", matrix_to_json(plant.F())},
        {"d_x", matrix_to_json(plant.d_x())},
        {"d_y", matrix_to_json(plant.d_y())},
    };
    j["objective"] = {
        {"seed", instance.objective.seed},
        {"R3", matrix_to_json(instance.objective.r3())},
        {"R2", matrix_to_json(instance.objective.r2())},
    };
    return j.dump(2) + "\n";
}

InstanceConfig instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.contains("plant") || !j.contains("objective")) {
        throw ConfigError("config: missing plant or objective section");
    }
    const json& jp = j["plant"];
    const json& jd = jp.at("dims");
    const PlantDims dims{jd.at("n").get<Eigen::Index>(), jd.at("p").get<Eigen::Index>(),
                         jd.at("q").get<Eigen::Index>(), jd.at("r").get<Eigen::Index>()};

    PlantModel plant(matrix_from_json(jp.at("A"), dims.n, dims.n, "A"),
                     matrix_from_json(jp.at("B"), dims.n, dims.p, "B"),
                     matrix_from_json(jp.at("C"), dims.q, dims.n, "C"),
                     matrix_from_json(jp.at("D"), dims.q, dims.r, "D"),
                     matrix_from_json(jp.at("E"), dims.n, dims.r, "E"),
                     matrix_from_json(jp.at("F"), dims.n, dims.n * dims.n, "F"),
                     vector_from_json(jp.at("d_x"), dims.r, "d_x"),
                     vector_from_json(jp.at("d_y"), dims.r, "d_y"));
    plant.seed = jp.value("seed", std::uint64_t{0});
    plant.a_norm = jp.value("a_norm", 0.0);
    plant.f_norm = jp.value("f_norm", 0.0);

    const json& jo = j["objective"];
    QuadraticObjective objective(matrix_from_json(jo.at("R3"), dims.p, dims.p, "R3"),
                                 vector_from_json(jo.at("R2"), dims.p, "R2"));
    objective.seed = jo.value("seed", std::uint64_t{0});
    return {std::move(plant), std::move(objective)};
}

void save_instance(const InstanceConfig& instance, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("save_instance: cannot open " + path);
    file << instance_to_json(instance);
    if (!file) throw IoError("save_instance: write failed for " + path);
}

InstanceConfig load_instance(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("load_instance: cannot open " + path);
    std::ostringstream text;
    text << file.rdbuf();
    return instance_from_json(text.str());
}

ExperimentSettings experiment_settings_from_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("experiment settings: cannot open " + path);
    json j;
    try {
        file >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentSettings out;
    if (!j.contains("experiment")) return out;
    const json& je = j["experiment"];
    if (je.contains("seeds")) out.seeds = je["seeds"].get<long>();
    if (je.contains("budget")) out.budget = je["budget"].get<long>();
    if (je.contains("record_stride")) out.record_stride = je["record_stride"].get<long>();
    if (je.contains("methods")) {
        std::vector<ControllerConfig> methods;
        for (const auto& jm : je["methods"]) {
            const auto method = method_from_name(jm.at("method").get<std::string>());
            if (!method) throw ConfigError("config: unknown method in experiment section");
            ControllerConfig cfg;
            cfg.method = *method;
            cfg.eta = jm.at("eta").get<double>();
            cfg.delta = jm.value("delta", 0.0);
            methods.push_back(cfg);
        }
        out.methods = std::move(methods);
    }
    return out;
}

} // namespace zofo
