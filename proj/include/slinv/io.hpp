#pragma once

// File formats: potentials as CSV "x,sigma" on the uniform grid, spectral
// data and sequences as JSON, Gram and basis matrices as CSV.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "slinv/error.hpp"
#include "slinv/potential.hpp"
#include "slinv/seqspace.hpp"
#include "slinv/spectra.hpp"

namespace slinv {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::invalid_argument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::invalid_argument, "cannot write " + path);
  out << text;
}

inline nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_argument, path + ": " + e.what());
  }
}

inline void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Potentials.

inline std::string potential_to_csv(const Potential& sigma) {
  std::string out = "x,sigma\n";
  for (std::size_t i = 0; i <= sigma.n_grid(); ++i) {
    out += format_double(sigma.x(i));
    out += ',';
    out += format_double(sigma[i]);
    out += '\n';
  }
  return out;
}

/// Parses "x,sigma" rows; x must be the uniform grid on [0, pi].
inline Potential potential_from_csv(const std::string& text, double theta = 1.0) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> xs, vs;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw error(errc::invalid_potential, "expected x,sigma in: " + line);
    try {
      std::size_t used = 0;
      const double x = std::stod(line.substr(0, comma), &used);
      const double v = std::stod(line.substr(comma + 1));
      xs.push_back(x);
      vs.push_back(v);
    } catch (const std::invalid_argument&) {
      if (xs.empty()) continue;  // header
      throw error(errc::invalid_potential, "non-numeric row: " + line);
    } catch (const std::out_of_range&) {
      throw error(errc::invalid_potential, "value out of range: " + line);
    }
  }
  if (xs.size() < 2) throw error(errc::invalid_potential, "too few rows");
  const double h = pi / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - static_cast<double>(i) * h) > 1e-9 * (1.0 + xs[i])) {
      throw error(errc::invalid_potential, "x column is not the uniform grid on [0, pi]");
    }
  }
  return Potential(std::move(vs), theta);
}

inline Potential read_potential(const std::string& path, double theta = 1.0) {
  return potential_from_csv(read_text(path), theta);
}

inline void write_potential(const std::string& path, const Potential& sigma) {
  write_text(path, potential_to_csv(sigma));
}

// ---------------------------------------------------------------------------
// Spectral data: {flavor, N, lambda[], mu[] | alpha[], s[]}.

inline nlohmann::json data_to_json(const EigenData& e, const RegularizedData& r) {
  nlohmann::json j;
  j["flavor"] = flavor_name(r.flavor);
  j["N"] = r.n;
  j["lambda"] = e.lambda;
  if (r.flavor == Flavor::borg) j["mu"] = e.mu;
  else j["alpha"] = e.alpha;
  j["s"] = r.s;
  return j;
}

/// Reads s[] when present, else regularizes the spectra.
inline RegularizedData data_from_json(const nlohmann::json& j) {
  try {
    RegularizedData r;
    r.flavor = parse_flavor(j.at("flavor").get<std::string>());
    if (j.contains("s")) {
      r.s = j.at("s").get<std::vector<double>>();
      r.n = j.contains("N") ? j.at("N").get<std::size_t>() : r.s.size() / 2;
    } else {
      EigenData e;
      e.flavor = r.flavor;
      e.lambda = j.at("lambda").get<std::vector<double>>();
      e.n = j.contains("N") ? j.at("N").get<std::size_t>() : e.lambda.size();
      if (r.flavor == Flavor::borg) e.mu = j.at("mu").get<std::vector<double>>();
      else e.alpha = j.at("alpha").get<std::vector<double>>();
      if (e.lambda.size() < e.n || (r.flavor == Flavor::borg ? e.mu.size() : e.alpha.size()) < e.n) {
        throw error(errc::invalid_argument, "spectral arrays shorter than N");
      }
      r = regularize(e);
    }
    if (r.s.size() != 2 * r.n) throw error(errc::invalid_argument, "s must hold 2N entries");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_argument, std::string("malformed data JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Extended sequences: {theta, flavor, N, tail[], special[]}.

inline nlohmann::json extseq_to_json(const ExtSeq& x) {
  return {{"theta", x.theta}, {"flavor", flavor_name(x.flavor)}, {"N", x.n}, {"tail", x.tail}, {"special", x.special}};
}

inline ExtSeq extseq_from_json(const nlohmann::json& j) {
  try {
    ExtSeq x;
    x.theta = j.at("theta").get<double>();
    x.flavor = parse_flavor(j.at("flavor").get<std::string>());
    x.tail = j.at("tail").get<std::vector<double>>();
    x.special = j.contains("special") ? j.at("special").get<std::vector<double>>() : std::vector<double>{};
    x.n = j.contains("N") ? j.at("N").get<std::size_t>() : x.tail.size() / 2;
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_argument, std::string("malformed sequence JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Matrices.

inline std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace slinv
