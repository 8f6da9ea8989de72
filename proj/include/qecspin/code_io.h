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

#ifndef QECSPIN_CODE_IO_H
#define QECSPIN_CODE_IO_H

#include <string>

#include "json.hpp"
#include "qecspin/codes.h"

namespace qecspin {

// Rows are hex strings; see docs/formats.md for the bit order.
nlohmann::json code_to_json(const StabilizerCode &code);
StabilizerCode code_from_json(const nlohmann::json &j);

void save_code(const StabilizerCode &code, const std::string &path);
StabilizerCode load_code(const std::string &path);

}  // namespace qecspin

#endif
