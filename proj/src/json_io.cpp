#include "ool/json_io.hpp"

#include "ool/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ool {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_error(std::string("expected an object with key '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing key '") + key + "'");
  return *it;
}

Index as_index(const Json& j, const char* what) {
  if (!j.is_number_integer()) parse_error(std::string(what) + " must be an integer");
  return j.get<Index>();
}

std::vector<Index> index_list(const Json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array");
  std::vector<Index> out;
  for (const auto& v : j) out.push_back(as_index(v, what));
  return out;
}

// JSON has no non-finite numbers; they travel as these strings
double as_double(const Json& j, const char* what) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  }
  if (!j.is_number()) parse_error(std::string(what) + " must be a number");
  return j.get<double>();
}

Json number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return v;
}

template <typename T, typename F>
std::map<std::string, T> object_map(const Json& j, F&& convert) {
  std::map<std::string, T> out;
  if (j.is_null()) return out;
  if (!j.is_object()) parse_error("expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) out.emplace(it.key(), convert(it.value()));
  return out;
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_error("a matrix must be a nonempty array of rows");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) parse_error("matrix rows must be nonempty arrays");
  ComplexMatrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols) parse_error("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        parse_error("matrix entries must be [re, im] pairs");
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

Json to_json(const SpaceSpec& s) { return {{"summands", s.summands()}}; }

SpaceSpec space_from_json(const Json& j) {
  return SpaceSpec(index_list(field(j, "summands"), "summands"));
}

Json to_json(const Element& e) {
  Json blocks = Json::array();
  for (const auto& b : e.blocks()) blocks.push_back(to_json(b));
  return {{"level", {e.level().rows, e.level().cols}}, {"blocks", blocks}};
}

Element element_from_json(const Json& j) {
  const std::vector<Index> lv = index_list(field(j, "level"), "level");
  if (lv.size() != 2 || lv[0] < 1 || lv[1] < 1) parse_error("level must be [l, m] with l, m >= 1");
  const Json& bj = field(j, "blocks");
  if (!bj.is_array() || bj.empty()) parse_error("blocks must be a nonempty array");
  std::vector<ComplexMatrix> blocks;
  std::vector<Index> dims;
  for (const auto& b : bj) {
    ComplexMatrix m = matrix_from_json(b);
    if (m.rows() % lv[0] != 0) parse_error("block rows are not a multiple of the level");
    dims.push_back(m.rows() / lv[0]);
    blocks.push_back(std::move(m));
  }
  return Element(SpaceSpec(dims), {lv[0], lv[1]}, std::move(blocks));
}

Json to_json(const StarHom& h) {
  return {{"source", h.source().summands()}, {"target", h.target().summands()}, {"mult", h.mult()}};
}

StarHom hom_from_json(const Json& j) {
  const Json& mj = field(j, "mult");
  if (!mj.is_array()) parse_error("mult must be an array of rows");
  Multiplicity mult;
  for (const auto& row : mj) mult.push_back(index_list(row, "mult row"));
  return StarHom(SpaceSpec(index_list(field(j, "source"), "source")),
                 SpaceSpec(index_list(field(j, "target"), "target")), std::move(mult));
}

Json to_json(const K0Class& c) { return {{"diff", c.diff}}; }

K0Class k0_from_json(const Json& j) {
  const Json& d = field(j, "diff");
  if (!d.is_array()) parse_error("diff must be an array");
  K0Class c;
  for (const auto& v : d) {
    if (!v.is_number_integer()) parse_error("diff entries must be integers");
    c.diff.push_back(v.get<long long>());
  }
  return c;
}

Json to_json(const Payload& p) {
  Json elements = Json::object();
  for (const auto& [k, v] : p.elements) elements[k] = to_json(v);
  Json scalars = Json::object();
  for (const auto& [k, v] : p.scalars) scalars[k] = to_json(v);
  Json params = Json::object();
  for (const auto& [k, v] : p.params) params[k] = number(v);
  return {{"elements", elements}, {"scalars", scalars}, {"params", params}, {"labels", p.labels}};
}

Payload payload_from_json(const Json& j) {
  Payload p;
  p.elements = object_map<Element>(field(j, "elements"), element_from_json);
  p.scalars = object_map<ComplexMatrix>(field(j, "scalars"), matrix_from_json);
  p.params = object_map<double>(field(j, "params"), [](const Json& v) { return as_double(v, "param"); });
  p.labels = object_map<std::string>(field(j, "labels"), [](const Json& v) {
    if (!v.is_string()) parse_error("labels must be strings");
    return v.get<std::string>();
  });
  return p;
}

Json to_json(const Counterexample& c) {
  return {{"clause", c.clause}, {"relation", c.relation}, {"margin", number(c.margin)},
          {"payload", to_json(c.payload)}};
}

Counterexample counterexample_from_json(const Json& j) {
  Counterexample c;
  c.clause = field(j, "clause").get<std::string>();
  c.relation = j.value("relation", "");
  c.margin = as_double(field(j, "margin"), "margin");
  c.payload = payload_from_json(field(j, "payload"));
  return c;
}

Json to_json(const Verdict& v) {
  Json j = {{"name", v.name},
            {"statement", v.statement},
            {"seed", v.seed},
            {"samples", v.samples},
            {"skipped", v.skipped},
            {"passed", v.passed},
            {"guaranteed", v.guaranteed},
            {"threshold", number(v.threshold)},
            {"worst_margin", v.worst_margin ? number(*v.worst_margin) : Json(nullptr)},
            {"counterexample", v.counterexample ? to_json(*v.counterexample) : Json(nullptr)}};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Verdict verdict_from_json(const Json& j) {
  try {
    Verdict v;
    v.name = field(j, "name").get<std::string>();
    v.statement = j.value("statement", "");
    v.seed = field(j, "seed").get<std::uint64_t>();
    v.samples = field(j, "samples").get<std::size_t>();
    v.skipped = j.value("skipped", std::size_t{0});
    v.passed = field(j, "passed").get<bool>();
    v.guaranteed = j.value("guaranteed", true);
    v.threshold = j.contains("threshold") ? as_double(j["threshold"], "threshold") : 0.0;
    if (j.contains("worst_margin") && !j["worst_margin"].is_null()) {
      v.worst_margin = as_double(j["worst_margin"], "worst_margin");
    }
    if (j.contains("counterexample") && !j["counterexample"].is_null()) {
      v.counterexample = counterexample_from_json(j["counterexample"]);
    }
    v.note = j.value("note", "");
    return v;
  } catch (const nlohmann::json::exception& e) {
    parse_error(e.what());
  }
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

}  // namespace ool
