#include "mgl/report.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

namespace mgl {

using nlohmann::json;

json make_report(const std::string& command, const std::string& anchor,
                 const json& inputs, const json& results, bool pass) {
    json rep;
    rep["tool"] = kToolName;
    rep["version"] = kToolVersion;
    rep["command"] = command;
    rep["anchor"] = anchor;
    rep["inputs"] = inputs;
    rep["results"] = results;
    rep["pass"] = pass;
    return rep;
}

void attach_meta(json& report, double wall_seconds) {
    report["meta"]["wall_seconds"] = wall_seconds;
}

json strip_meta(json report) {
    if (report.is_object()) {
        report.erase("meta");
        for (auto& [key, value] : report.items()) value = strip_meta(value);
    } else if (report.is_array()) {
        for (auto& value : report) value = strip_meta(value);
    }
    return report;
}

void write_report(const json& report, const std::string& path) {
    const std::string text = report.dump(2) + "\n";
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

}  // namespace mgl
