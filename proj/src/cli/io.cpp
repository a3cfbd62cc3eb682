#include "conesynth/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "conesynth/errors.hpp"

namespace conesynth::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::InvalidInput, "problem file", path + ": " + what);
}

int get_int(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_number_integer()) bad(path + "." + key, "expected an integer");
  return j[key].get<int>();
}

}  // namespace

double round12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

Json triples(const BiSeries& s) {
  Json list = Json::array();
  const auto& b = s.box();
  for (int t = b.temporal_min; t <= b.temporal_max; ++t)
    for (int i = b.spatial_min; i <= b.spatial_max; ++i)
      if (const double v = s(i, t); v != 0.0) list.push_back(Json::array({i, t, round12(v)}));
  return list;
}

Json to_json(const BiSeries& s) {
  const auto& b = s.box();
  Json j;
  j["box"] = {{"spatial_min", b.spatial_min},
              {"spatial_max", b.spatial_max},
              {"temporal_min", b.temporal_min},
              {"temporal_max", b.temporal_max}};
  j["coeffs"] = triples(s);
  return j;
}

Json to_json(const RationalTransfer& r) {
  Json j;
  j["num"] = triples(r.num());
  j["den"] = triples(r.den());
  return j;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(round12(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const LRealization& g) {
  Json j;
  j["states"] = g.states();
  j["A_-1"] = to_json(g.A.minus);
  j["A_0"] = to_json(g.A.zero);
  j["A_+1"] = to_json(g.A.plus);
  j["B"] = to_json(g.B);
  j["C_-1"] = to_json(g.C.minus);
  j["C_0"] = to_json(g.C.zero);
  j["C_+1"] = to_json(g.C.plus);
  j["D"] = to_json(g.D);
  return j;
}

BiSeries bi_series_from_json(const Json& j, const std::string& path) {
  const Json* list = &j;
  std::optional<SupportBox> box;
  if (j.is_object()) {
    if (!j.contains("coeffs")) bad(path, "missing \"coeffs\"");
    list = &j["coeffs"];
    if (j.contains("box")) {
      const Json& b = j["box"];
      box = SupportBox{get_int(b, "spatial_min", path + ".box"), get_int(b, "spatial_max", path + ".box"),
                       get_int(b, "temporal_min", path + ".box"), get_int(b, "temporal_max", path + ".box")};
      if (!box->valid()) bad(path + ".box", "min must not exceed max");
    }
  }
  if (!list->is_array()) bad(path, "expected a list of [i, t, value] triples");
  SupportBox hull{};
  bool any = false;
  for (std::size_t k = 0; k < list->size(); ++k) {
    const Json& e = (*list)[k];
    const std::string where = path + "[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number()) {
      bad(where, "expected [i, t, value] with integer i, t");
    }
    const int i = e[0].get<int>(), t = e[1].get<int>();
    hull = any ? SupportBox::hull(hull, {i, i, t, t}) : SupportBox{i, i, t, t};
    any = true;
  }
  if (box && any && !(SupportBox::hull(*box, hull) == *box)) bad(path, "coefficient outside the declared box");
  BiSeries s(box ? *box : hull);
  for (const Json& e : *list) s.at(e[0].get<int>(), e[1].get<int>()) += e[2].get<double>();
  return s;
}

RationalTransfer rational_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("num")) bad(path, "expected {\"num\": ..., \"den\": ...}");
  const BiSeries num = bi_series_from_json(j["num"], path + ".num");
  const BiSeries den = j.contains("den") ? bi_series_from_json(j["den"], path + ".den") : BiSeries::delta();
  try {
    return {num, den};
  } catch (const Error& e) {
    bad(path + ".den", e.what());
  }
}

ProblemFile problem_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string()) bad("mode", "missing or not a string");
  const std::string mode = j["mode"].get<std::string>();
  ProblemFile f;
  auto need = [&](const char* key) -> const Json& {
    if (!j.contains(key)) bad(key, "required for mode " + mode);
    return j[key];
  };
  if (mode == "disturbance_attenuation") {
    f.problem = Problem::disturbance_attenuation(rational_from_json(need("G"), "G"), rational_from_json(need("W"), "W"));
  } else if (mode == "general") {
    f.problem = Problem::general(rational_from_json(need("T1"), "T1"), rational_from_json(need("T2"), "T2"),
                                 rational_from_json(need("Gyu"), "Gyu"));
  } else {
    bad("mode", "unknown mode \"" + mode + "\" (expected disturbance_attenuation or general)");
  }
  if (j.contains("orders")) {
    const Json& o = j["orders"];
    if (!o.is_object()) bad("orders", "expected an object");
    if (o.contains("m")) f.orders.m = get_int(o, "m", "orders");
    if (o.contains("S")) f.orders.S = get_int(o, "S", "orders");
    if (o.contains("T")) f.orders.T = get_int(o, "T", "orders");
  }
  validate(f.problem);
  return f;
}

Json problem_to_json(const Problem& p) {
  Json j;
  if (p.mode == ProblemMode::disturbance_attenuation) {
    j["mode"] = "disturbance_attenuation";
    j["G"] = to_json(p.Gyu);
    j["W"] = to_json(p.T1);
  } else {
    j["mode"] = "general";
    j["T1"] = to_json(p.T1);
    j["T2"] = to_json(p.T2);
    j["Gyu"] = to_json(p.Gyu);
  }
  return j;
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "read_file", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, "read_file", path + ": " + e.what());
  }
}

}  // namespace conesynth::io
