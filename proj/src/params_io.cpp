#include "ranklab/params_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ranklab/constants.hpp"
#include "ranklab/errors.hpp"

namespace ranklab {

using nlohmann::json;

std::string params_to_json(const ModelParams& p) {
  json j;
  j["nmax"] = kModeledSelmerMax;
  j["s"] = p.s;
  json theta = json::object();
  for (int n = 1; n <= kModeledSelmerMax; ++n)
    theta[std::to_string(n)] = {{"C", p.theta_coeff[n].C}, {"e", p.theta_coeff[n].e}};
  j["theta"] = theta;
  json rho = json::object();
  for (int n = 2; n <= kModeledSelmerMax; ++n)
    rho[std::to_string(n)] = {{"D", p.rho_coeff[n].D}, {"f", p.rho_coeff[n].f}};
  j["rho"] = rho;
  json cov = json::object();
  for (int n = 2; n <= kModeledSelmerMax; ++n) cov[std::to_string(n)] = p.cov11[n];
  j["cov11"] = cov;
  return j.dump(2) + "\n";
}

ModelParams params_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("params JSON: ") + e.what());
  }
  try {
    if (j.at("nmax").get<int>() != kModeledSelmerMax)
      throw ValidationError("params JSON: nmax must be 5");
    ModelParams p;
    const auto& s = j.at("s");
    if (!s.is_array() || s.size() != 6)
      throw ValidationError("params JSON: 's' must hold s_0..s_5");
    for (int n = 0; n <= kModeledSelmerMax; ++n) p.s[n] = s.at(n).get<double>();
    for (int n = 1; n <= kModeledSelmerMax; ++n) {
      const auto& t = j.at("theta").at(std::to_string(n));
      p.theta_coeff[n] = {t.at("C").get<double>(), t.at("e").get<double>()};
    }
    for (int n = 2; n <= kModeledSelmerMax; ++n) {
      const auto& r = j.at("rho").at(std::to_string(n));
      p.rho_coeff[n] = {r.at("D").get<double>(), r.at("f").get<double>()};
      p.cov11[n] = j.at("cov11").at(std::to_string(n)).get<double>();
    }
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("params JSON: ") + e.what());
  }
}

ModelParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open params file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputeError("cannot open for writing: " + tmp.string());
    out << contents;
    if (!out) throw ComputeError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw ComputeError("rename failed: " + tmp.string() + " -> " + target.string());
}

void save_params(const ModelParams& p, const std::string& path) {
  atomic_write_file(path, params_to_json(p));
}

}  // namespace ranklab
