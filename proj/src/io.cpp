#include "cmrs/io.hpp"

#include "cmrs/errors.hpp"

namespace cmrs {

using nlohmann::json;

namespace {

json element_json(const GroupSpec& g, std::size_t x) { return g.element(x).residues; }

json array_json(const GroupSpec& g, const Array2& arr) {
  json rows = json::array();
  for (const auto& row : arr) {
    json r = json::array();
    for (auto x : row) r.push_back(element_json(g, x));
    rows.push_back(std::move(r));
  }
  return rows;
}

json classes_json(const GroupSpec& g, const std::vector<std::vector<std::size_t>>& classes) {
  json out = json::array();
  for (const auto& cls : classes) {
    json c = json::array();
    for (auto x : cls) c.push_back(element_json(g, x));
    out.push_back(std::move(c));
  }
  return out;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t size_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_unsigned()) throw ParseError(std::string("field \"") + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

GroupSpec group_field(const json& j) {
  const auto& v = field(j, "group");
  if (!v.is_string()) throw ParseError("field \"group\" must be a string");
  try {
    return GroupSpec::parse(v.get<std::string>());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("group: ") + e.what());
  }
}

std::size_t parse_element(const GroupSpec& g, const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != g.rank())
    throw ParseError(where + ": expected a residue vector of length " + std::to_string(g.rank()));
  GroupElement e;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    if (!v[i].is_number_integer()) throw ParseError(where + ": residues must be integers");
    const auto r = v[i].get<std::int64_t>();
    if (r < 0 || r >= g.components()[i])
      throw ParseError(where + ": residue " + std::to_string(r) + " not reduced mod " + std::to_string(g.components()[i]));
    e.residues.push_back(r);
  }
  return g.index_of(e);
}

std::vector<std::size_t> parse_list(const GroupSpec& g, const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(parse_element(g, v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

Array2 parse_array(const GroupSpec& g, const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of rows");
  Array2 out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_list(g, v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<std::size_t>> parse_classes(const GroupSpec& g, const json& j) {
  return parse_array(g, field(j, "classes"), "classes");
}

Existence parse_status(const std::string& s) {
  if (s == "Exists") return Existence::Exists;
  if (s == "NotExists") return Existence::NotExists;
  if (s == "Unknown") return Existence::Unknown;
  throw ParseError("status: unknown value \"" + s + "\"");
}

struct ToJson {
  json operator()(const ZeroSumPartition& p) const {
    return {{"group", p.group.to_string()}, {"m", p.m}, {"classes", classes_json(p.group, p.classes)}};
  }
  json operator()(const CmPartitionCertificate& c) const {
    const auto& g = c.group();
    return {{"group", g.to_string()}, {"m", c.m()}, {"phi", c.mapping.table},
            {"classes", classes_json(g, c.partition.classes)}};
  }
  json operator()(const KotzigArraySet& s) const {
    json arrays = json::array();
    for (const auto& arr : s.arrays) arrays.push_back(array_json(s.group, arr));
    return {{"group", s.group.to_string()}, {"j", s.j}, {"m", s.m}, {"arrays", arrays}};
  }
  json operator()(const IntKotzigArray& a) const {
    return {{"j", a.j}, {"k", a.k}, {"centered", a.centered}, {"entries", a.entries}};
  }
  json operator()(const RectangleSet& r) const {
    json rects = json::array();
    for (const auto& rect : r.rects) rects.push_back(array_json(r.group, rect));
    return {{"group", r.group.to_string()},
            {"a", r.a},
            {"b", r.b},
            {"c", r.c},
            {"omega", element_json(r.group, r.omega)},
            {"delta", element_json(r.group, r.delta)},
            {"rects", rects},
            {"provenance", r.provenance}};
  }
  json operator()(const VerdictRecord& v) const {
    json out = {{"group", v.group.to_string()}, {"a", v.a}, {"b", v.b}, {"c", v.c},
                {"status", to_string(v.status)}, {"rule", v.rule}};
    if (v.witness_path) out["witness_path"] = *v.witness_path;
    return out;
  }
};

}  // namespace

std::string kind_of(const Certificate& c) {
  static const char* names[] = {"partition", "cm_partition", "kas", "int_kotzig", "mrs", "verdict"};
  return names[c.index()];
}

json to_json(const Certificate& c) { return std::visit(ToJson{}, c); }

Certificate from_json(const json& j) {
  if (!j.is_object()) throw ParseError("certificate must be a JSON object");
  try {
    if (j.contains("status")) {
      VerdictRecord v{group_field(j), size_field(j, "a"), size_field(j, "b"), size_field(j, "c"),
                      parse_status(field(j, "status").get<std::string>()), field(j, "rule").get<std::string>(),
                      std::nullopt};
      if (j.contains("witness_path")) v.witness_path = j.at("witness_path").get<std::string>();
      return v;
    }
    if (j.contains("entries")) {
      IntKotzigArray a{size_field(j, "j"), size_field(j, "k"), field(j, "centered").get<bool>(),
                       field(j, "entries").get<std::vector<std::vector<std::int64_t>>>()};
      return a;
    }
    const auto g = group_field(j);
    if (j.contains("rects")) {
      RectangleSet r{g, size_field(j, "a"), size_field(j, "b"), size_field(j, "c"), {},
                     parse_element(g, field(j, "omega"), "omega"), parse_element(g, field(j, "delta"), "delta"),
                     field(j, "provenance").get<std::vector<std::string>>()};
      const auto& rects = field(j, "rects");
      if (!rects.is_array()) throw ParseError("rects: expected an array");
      for (std::size_t s = 0; s < rects.size(); ++s)
        r.rects.push_back(parse_array(g, rects[s], "rects[" + std::to_string(s) + "]"));
      return r;
    }
    if (j.contains("arrays")) {
      KotzigArraySet s{g, size_field(j, "j"), size_field(j, "m"), {}};
      const auto& arrays = field(j, "arrays");
      if (!arrays.is_array()) throw ParseError("arrays: expected an array");
      for (std::size_t t = 0; t < arrays.size(); ++t)
        s.arrays.push_back(parse_array(g, arrays[t], "arrays[" + std::to_string(t) + "]"));
      return s;
    }
    if (j.contains("phi")) {
      CmPartitionCertificate c;
      c.mapping.group = g;
      c.mapping.table = field(j, "phi").get<std::vector<std::size_t>>();
      c.partition = {g, size_field(j, "m"), parse_classes(g, j)};
      return c;
    }
    if (j.contains("classes")) return ZeroSumPartition{g, size_field(j, "m"), parse_classes(g, j)};
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
  throw ParseError("unrecognised certificate: none of phi, arrays, entries, rects, status, classes present");
}

std::string serialize(const Certificate& c) { return to_json(c).dump() + "\n"; }

Certificate parse_certificate(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

VerdictRecord make_verdict(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c) {
  const auto v = decide_existence(g, a, b, c);
  return {g, a, b, c, v.status, v.rule, std::nullopt};
}

std::optional<std::string> check_certificate(const Certificate& c) {
  struct Check {
    std::optional<std::string> operator()(const ZeroSumPartition& p) const { return check_zero_sum_partition(p); }
    std::optional<std::string> operator()(const CmPartitionCertificate& c) const { return check_cm_certificate(c); }
    std::optional<std::string> operator()(const KotzigArraySet& s) const { return check_kas(s); }
    std::optional<std::string> operator()(const IntKotzigArray& a) const { return check_int_kotzig(a); }
    std::optional<std::string> operator()(const RectangleSet& r) const { return check_mrs(r); }
    std::optional<std::string> operator()(const VerdictRecord& v) const {
      Verdict d;
      try {
        d = decide_existence(v.group, v.a, v.b, v.c);
      } catch (const Error& e) {
        return std::string("verdict: ") + e.what();
      }
      if (d.status != v.status) return "status: recorded " + to_string(v.status) + ", decided " + to_string(d.status);
      if (d.rule != v.rule) return "rule: recorded " + v.rule + ", decided " + d.rule;
      return std::nullopt;
    }
  };
  return std::visit(Check{}, c);
}

}  // namespace cmrs
