#pragma once

#include <string>

#include "ranklab/rank_model.hpp"

namespace ranklab {

// JSON schema:
// {"nmax":5, "s":[s0..s5],
//  "theta":{"1":{"C":..,"e":..}, ..., "5":{...}},
//  "rho":{"2":{"D":..,"f":..}, ..., "5":{...}},
//  "cov11":{"2":0.0,"3":0.0,"4":-0.025,"5":0.0}}
std::string params_to_json(const ModelParams& p);
ModelParams params_from_json(const std::string& text);

ModelParams load_params(const std::string& path);

// Atomic write: temp file in the target directory, then rename.
void save_params(const ModelParams& p, const std::string& path);
void atomic_write_file(const std::string& path, const std::string& contents);

}  // namespace ranklab
