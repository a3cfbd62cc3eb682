#pragma once

// JSON documents read and written by the command-line tool.
//
//   BiSeries          {"box": {"spatial_min", "spatial_max", "temporal_min",
//                     "temporal_max"}, "coeffs": [[i, t, v], ...]}
//                     (a bare [[i, t, v], ...] list is accepted on input)
//   RationalTransfer  {"num": <BiSeries>, "den": <BiSeries>}
//   Problem file      {"mode": "disturbance_attenuation", "G": .., "W": ..}
//                     {"mode": "general", "T1": .., "T2": .., "Gyu": ..}
//                     plus an optional "orders": {"m", "S", "T"} block.
//   Realization       {"states", "A_-1", "A_0", "A_+1", "B", "C_-1", "C_0",
//                     "C_+1", "D"}, matrices as row-major nested arrays.
//
// Numbers are written rounded to 12 significant digits.

#include <optional>
#include <string>

#include "json.hpp"

#include "conesynth/bivariate.hpp"
#include "conesynth/rational.hpp"
#include "conesynth/statespace.hpp"
#include "conesynth/synthesis.hpp"

namespace conesynth::io {

using Json = nlohmann::ordered_json;

// Round to 12 significant digits.
double round12(double x);
// "%.12g": scientific below 1e-4.
std::string format_number(double x);

Json to_json(const BiSeries& s);
Json triples(const BiSeries& s);
Json to_json(const RationalTransfer& r);
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const LRealization& g);

// Throw Error(InvalidInput) with the offending key path.
BiSeries bi_series_from_json(const Json& j, const std::string& path = "series");
RationalTransfer rational_from_json(const Json& j, const std::string& path = "transfer");

struct Orders {
  std::optional<int> m;
  std::optional<int> S;
  std::optional<int> T;
};

struct ProblemFile {
  Problem problem;
  Orders orders;
};

// Parses and validates (cone-causal, stable Gyu).
ProblemFile problem_from_json(const Json& j);
Json problem_to_json(const Problem& p);

Json read_file(const std::string& path);

}  // namespace conesynth::io
