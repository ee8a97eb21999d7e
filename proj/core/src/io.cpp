#include "bufins/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bufins/error.hpp"

namespace bufins {

namespace {

using nlohmann::json;

enum class Quantity { kResistance, kCapacitance, kTime };

double unit_scale(Quantity q, const std::string& tag, std::string_view field) {
  switch (q) {
    case Quantity::kResistance:
      if (tag == "ohm" || tag == "Ω") return 1.0;
      if (tag == "kohm" || tag == "kΩ") return 1e3;
      break;
    case Quantity::kCapacitance:
      if (tag == "F") return 1.0;
      if (tag == "fF") return 1e-15;
      if (tag == "pF") return 1e-12;
      break;
    case Quantity::kTime:
      if (tag == "s") return 1.0;
      if (tag == "ps") return 1e-12;
      if (tag == "ns") return 1e-9;
      break;
  }
  throw ParseError("unit '" + tag + "' is not valid for field '" + std::string(field) + "'");
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void expect_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys,
                    std::string_view what) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) throw ParseError("unknown key '" + key + "' in " + std::string(what));
  }
}

std::string get_string(const json& j, const char* key, std::string_view what) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(std::string(what) + " needs string field '" + key + "'");
  }
  return it->get<std::string>();
}

/// Reads a numeric field, applying the entity's unit tag if present.
double get_quantity(const json& j, const char* key, Quantity q, std::string_view what) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw ParseError(std::string(what) + " needs numeric field '" + key + "'");
  }
  const double value = it->get<double>();
  const auto units = j.find("units");
  if (units == j.end()) return value;
  if (!units->is_object()) throw ParseError(std::string(what) + ": 'units' must be an object");
  const auto tag = units->find(key);
  if (tag == units->end()) return value;
  if (!tag->is_string()) throw ParseError(std::string(what) + ": unit tags must be strings");
  const double scale = unit_scale(q, tag->get<std::string>(), key);
  return scale == 1.0 ? value : value * scale;
}

void check_unit_keys(const json& j, std::initializer_list<std::string_view> fields,
                     std::string_view what) {
  const auto units = j.find("units");
  if (units == j.end()) return;
  if (!units->is_object()) throw ParseError(std::string(what) + ": 'units' must be an object");
  reject_unknown(*units, fields, std::string(what) + " units");
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

RoutingTree parse_net(std::string_view text) {
  const json doc = parse_document(text);
  expect_object(doc, "net");
  reject_unknown(doc, {"source", "driver", "sinks", "internal", "edges", "library_ref"}, "net");

  NetSpec spec;
  spec.source = get_string(doc, "source", "net");
  spec.library_ref = get_string(doc, "library_ref", "net");

  if (const auto it = doc.find("driver"); it != doc.end()) {
    expect_object(*it, "driver");
    reject_unknown(*it, {"r", "k", "units"}, "driver");
    check_unit_keys(*it, {"r", "k"}, "driver");
    spec.driver = DriverSpec{get_quantity(*it, "r", Quantity::kResistance, "driver"),
                             get_quantity(*it, "k", Quantity::kTime, "driver")};
  }

  const auto sinks = doc.find("sinks");
  if (sinks == doc.end()) throw ParseError("net needs object field 'sinks'");
  expect_object(*sinks, "sinks");
  for (const auto& [id, s] : sinks->items()) {
    const std::string what = "sink '" + id + "'";
    expect_object(s, what);
    reject_unknown(s, {"c", "rat", "units"}, what);
    check_unit_keys(s, {"c", "rat"}, what);
    spec.sinks[id] = SinkSpec{get_quantity(s, "c", Quantity::kCapacitance, what),
                              get_quantity(s, "rat", Quantity::kTime, what)};
  }

  if (const auto internal = doc.find("internal"); internal != doc.end()) {
    expect_object(*internal, "internal");
    for (const auto& [id, v] : internal->items()) {
      const std::string what = "internal vertex '" + id + "'";
      expect_object(v, what);
      reject_unknown(v, {"buffers"}, what);
      InternalSpec entry;
      if (const auto b = v.find("buffers"); b != v.end()) {
        if (!b->is_array()) throw ParseError(what + ": 'buffers' must be an array");
        for (const auto& name : *b) {
          if (!name.is_string()) throw ParseError(what + ": buffer ids must be strings");
          entry.buffers.push_back(name.get<std::string>());
        }
      }
      spec.internal[id] = std::move(entry);
    }
  }

  const auto edges = doc.find("edges");
  if (edges == doc.end() || !edges->is_array()) {
    throw ParseError("net needs array field 'edges'");
  }
  for (const auto& e : *edges) {
    expect_object(e, "edge");
    reject_unknown(e, {"from", "to", "r", "c", "units"}, "edge");
    EdgeSpec edge;
    edge.from = get_string(e, "from", "edge");
    edge.to = get_string(e, "to", "edge");
    const std::string what = "edge " + edge.from + "->" + edge.to;
    check_unit_keys(e, {"r", "c"}, what);
    edge.r = get_quantity(e, "r", Quantity::kResistance, what);
    edge.c = get_quantity(e, "c", Quantity::kCapacitance, what);
    spec.edges.push_back(std::move(edge));
  }

  return RoutingTree(std::move(spec));
}

std::string dump_net(const RoutingTree& tree) {
  const auto& spec = tree.spec();
  json doc;
  doc["source"] = spec.source;
  doc["library_ref"] = spec.library_ref;
  if (spec.driver) doc["driver"] = {{"r", spec.driver->r}, {"k", spec.driver->k}};
  doc["sinks"] = json::object();
  for (const auto& [id, s] : spec.sinks) doc["sinks"][id] = {{"c", s.c}, {"rat", s.rat}};
  doc["internal"] = json::object();
  for (const auto& [id, v] : spec.internal) doc["internal"][id] = {{"buffers", v.buffers}};
  doc["edges"] = json::array();
  for (const auto& e : spec.edges) {
    doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"r", e.r}, {"c", e.c}});
  }
  return doc.dump(1) + "\n";
}

RoutingTree load_net(const std::filesystem::path& path) {
  return parse_net(read_text_file(path));
}

void save_net(const RoutingTree& tree, const std::filesystem::path& path) {
  write_text_file(path, dump_net(tree));
}

BufferLibrary parse_library(std::string_view text) {
  const json doc = parse_document(text);
  expect_object(doc, "library");
  reject_unknown(doc, {"name", "buffers"}, "library");
  const auto name = get_string(doc, "name", "library");
  const auto list = doc.find("buffers");
  if (list == doc.end() || !list->is_array()) {
    throw ParseError("library needs array field 'buffers'");
  }
  std::vector<BufferType> buffers;
  for (const auto& b : *list) {
    expect_object(b, "buffer");
    reject_unknown(b, {"id", "r", "c", "k", "units"}, "buffer");
    BufferType t;
    t.id = get_string(b, "id", "buffer");
    const std::string what = "buffer '" + t.id + "'";
    check_unit_keys(b, {"r", "c", "k"}, what);
    t.r = get_quantity(b, "r", Quantity::kResistance, what);
    t.c = get_quantity(b, "c", Quantity::kCapacitance, what);
    t.k = get_quantity(b, "k", Quantity::kTime, what);
    if (!(t.r > 0.0)) throw ValidationError(what + " has non-positive R");
    buffers.push_back(std::move(t));
  }
  return BufferLibrary(name, std::move(buffers));
}

std::string dump_library(const BufferLibrary& lib) {
  json doc;
  doc["name"] = lib.name();
  doc["buffers"] = json::array();
  for (const auto& b : lib.buffers()) {
    doc["buffers"].push_back({{"id", b.id}, {"r", b.r}, {"c", b.c}, {"k", b.k}});
  }
  return doc.dump(1) + "\n";
}

BufferLibrary load_library(const std::filesystem::path& path) {
  return parse_library(read_text_file(path));
}

void save_library(const BufferLibrary& lib, const std::filesystem::path& path) {
  write_text_file(path, dump_library(lib));
}

Assignment parse_assignment(std::string_view text) {
  const json doc = parse_document(text);
  expect_object(doc, "assignment file");
  const auto it = doc.find("assignment");
  if (it == doc.end()) throw ParseError("assignment file needs object field 'assignment'");
  expect_object(*it, "assignment");
  Assignment a;
  for (const auto& [vertex, buffer] : it->items()) {
    if (!buffer.is_string()) {
      throw ParseError("assignment entry '" + vertex + "' must be a buffer id string");
    }
    a.placements[vertex] = buffer.get<std::string>();
  }
  return a;
}

std::string dump_assignment(const Assignment& assignment) {
  json doc;
  doc["assignment"] = assignment.placements;
  return doc.dump(1) + "\n";
}

Assignment load_assignment(const std::filesystem::path& path) {
  return parse_assignment(read_text_file(path));
}

}  // namespace bufins
