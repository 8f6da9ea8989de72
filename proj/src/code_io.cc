// Copyright 2026 The qecspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qecspin/code_io.h"

#include <fstream>
#include <stdexcept>

namespace qecspin {

namespace {

nlohmann::json rows_to_json(const BinaryMatrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : m.row_list()) {
        rows.push_back(r.to_hex());
    }
    return rows;
}

BinaryMatrix rows_from_json(const nlohmann::json &rows, size_t cols) {
    BinaryMatrix m(0, cols);
    for (const auto &r : rows) {
        m.append_row(BinaryVector::from_hex(r.get<std::string>(), cols));
    }
    return m;
}

}  // namespace

nlohmann::json code_to_json(const StabilizerCode &code) {
    nlohmann::json j;
    j["format"] = "qecspin-code/1";
    j["name"] = code.name();
    j["n"] = code.n();
    j["k"] = code.k();
    j["css"] = code.is_css();
    if (code.is_css()) {
        j["gx"] = rows_to_json(code.gx());
        j["gz"] = rows_to_json(code.gz());
    } else {
        j["g"] = rows_to_json(code.generators());
    }
    j["metadata"] = code.metadata();
    return j;
}

StabilizerCode code_from_json(const nlohmann::json &j) {
    if (!j.is_object() || j.value("format", "") != "qecspin-code/1") {
        throw std::invalid_argument("not a qecspin-code/1 document");
    }
    if (!j.contains("n")) {
        throw std::invalid_argument("code document has no \"n\"");
    }
    size_t n = j.at("n").get<size_t>();
    std::string name = j.value("name", "");
    StabilizerCode code = j.value("css", false)
                              ? StabilizerCode::css(rows_from_json(j.at("gx"), n), rows_from_json(j.at("gz"), n), name)
                              : StabilizerCode::from_generators(rows_from_json(j.at("g"), 2 * n), name);
    if (j.contains("metadata")) {
        for (const auto &[key, value] : j["metadata"].items()) {
            code.metadata()[key] = value.get<std::string>();
        }
    }
    if (j.contains("k") && j["k"].get<size_t>() != code.k()) {
        throw std::invalid_argument("stored k disagrees with the generators");
    }
    return code;
}

void save_code(const StabilizerCode &code, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << code_to_json(code).dump(2) << "\n";
}

StabilizerCode load_code(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    return code_from_json(nlohmann::json::parse(in));
}

}  // namespace qecspin
