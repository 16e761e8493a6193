#pragma once

// File formats: coloring documents, basis files, protocol trees, run
// reports, and the GraphViz export. All writers are deterministic so that
// repeated runs produce identical bytes.

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uob/census.hpp"
#include "uob/locc.hpp"

namespace uob {

using Json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void reject_unknown_fields(const Json& object,
                                  std::initializer_list<const char*> allowed,
                                  const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : allowed) known = known || key == name;
    if (!known) {
      throw IoError("unknown field \"" + key + "\" at " + where);
    }
  }
}

inline const Json& require_field(const Json& object, const char* key,
                                 const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw IoError("missing field \"" + std::string(key) + "\" at " + where);
  }
  return *it;
}

inline std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace detail

struct ColoringDocument {
  EdgeColoring coloring{1, {0}};
  std::map<int, std::string> color_names;  // optional display names
  Json metadata = Json::object();
};

inline std::map<int, std::string> name_table(
    const std::vector<std::string>& names) {
  std::map<int, std::string> table;
  for (std::size_t i = 0; i < names.size(); ++i) {
    table[static_cast<int>(i)] = names[i];
  }
  return table;
}

// Strict reader: schema version 1, every edge of the cube exactly once,
// colors as non-negative integers or as names (named colors receive ids in
// order of first appearance). Unknown fields fail with their location.
inline ColoringDocument parse_coloring(const Json& doc,
                                       const std::string& where = "$") {
  if (!doc.is_object()) throw IoError("expected an object at " + where);
  detail::reject_unknown_fields(
      doc, {"schema_version", "n", "edges", "metadata"}, where);
  if (detail::require_field(doc, "schema_version", where) != 1) {
    throw IoError("unsupported schema_version at " + where +
                  ".schema_version");
  }
  const Json& jn = detail::require_field(doc, "n", where);
  if (!jn.is_number_integer()) {
    throw IoError("field \"n\" must be an integer at " + where + ".n");
  }
  int n = jn.get<int>();
  try {
    require_dimension(n);
  } catch (const std::out_of_range& e) {
    throw IoError(std::string(e.what()) + " at " + where + ".n");
  }

  const Json& edges_json = detail::require_field(doc, "edges", where);
  if (!edges_json.is_array()) {
    throw IoError("field \"edges\" must be an array at " + where + ".edges");
  }

  Hypercube cube{n};
  std::vector<int> word(cube.edge_count(), -1);
  std::map<std::string, int> name_ids;
  std::map<int, std::string> names;
  bool saw_int = false, saw_name = false;

  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    std::string at = where + ".edges[" + std::to_string(i) + "]";
    const Json& entry = edges_json[i];
    if (!entry.is_object()) throw IoError("expected an object at " + at);
    detail::reject_unknown_fields(entry, {"from", "to", "color"}, at);
    const Json& jf = detail::require_field(entry, "from", at);
    const Json& jt = detail::require_field(entry, "to", at);
    if (!jf.is_number_integer() || !jt.is_number_integer() ||
        jf.get<long long>() < 0 || jt.get<long long>() < 0) {
      throw IoError("edge endpoints must be vertex ids at " + at);
    }
    Vertex from = jf.get<Vertex>();
    Vertex to = jt.get<Vertex>();
    if (from >= cube.vertices() || to >= cube.vertices()) {
      throw IoError("vertex out of range at " + at);
    }
    Edge e{0, 0};
    try {
      e = make_edge(from, to);
    } catch (const std::invalid_argument&) {
      throw IoError("endpoints " + std::to_string(from) + " and " +
                    std::to_string(to) + " are not adjacent at " + at);
    }
    std::size_t index = edge_index(n, e);
    if (word[index] != -1) {
      throw IoError("edge " + std::to_string(e.base) + "-" +
                    std::to_string(e.other()) + " appears twice at " + at);
    }

    const Json& jc = detail::require_field(entry, "color", at);
    int id = -1;
    if (jc.is_number_integer() && jc.get<long long>() >= 0) {
      saw_int = true;
      id = jc.get<int>();
    } else if (jc.is_string()) {
      saw_name = true;
      auto [it, fresh] =
          name_ids.try_emplace(jc.get<std::string>(),
                               static_cast<int>(name_ids.size()));
      id = it->second;
      names[id] = it->first;
    } else {
      throw IoError(
          "color must be a non-negative integer or a name at " + at +
          ".color");
    }
    if (saw_int && saw_name) {
      throw IoError("colors mix integer ids and names at " + at + ".color");
    }
    word[index] = id;
  }

  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] == -1) {
      Edge e = edge_at(n, i);
      throw IoError("edge " + std::to_string(e.base) + "-" +
                    std::to_string(e.other()) + " is missing from " + where +
                    ".edges");
    }
  }

  ColoringDocument out{EdgeColoring(n, word), std::move(names),
                       Json::object()};
  if (auto it = doc.find("metadata"); it != doc.end()) {
    if (!it->is_object()) {
      throw IoError("field \"metadata\" must be an object at " + where +
                    ".metadata");
    }
    out.metadata = *it;
    // a color name table in the metadata also feeds the display names
    if (auto table = it->find("color_names"); table != it->end()) {
      if (!table->is_object()) {
        throw IoError("metadata.color_names must be an object at " + where);
      }
      for (const auto& [key, value] : table->items()) {
        if (!value.is_string()) {
          throw IoError("metadata.color_names values must be strings at " +
                        where);
        }
        try {
          out.color_names[std::stoi(key)] = value.get<std::string>();
        } catch (const std::exception&) {
          throw IoError("metadata.color_names keys must be color ids at " +
                        where);
        }
      }
    }
  }
  return out;
}

inline Json coloring_to_json(const ColoringDocument& document) {
  Json doc;
  doc["schema_version"] = 1;
  doc["n"] = document.coloring.n();
  Json edge_array = Json::array();
  for (const auto& e : edges(Hypercube{document.coloring.n()})) {
    edge_array.push_back(Json{{"from", e.base},
                              {"to", e.other()},
                              {"color", document.coloring.color(e)}});
  }
  doc["edges"] = std::move(edge_array);
  Json metadata = document.metadata;
  if (!document.color_names.empty()) {
    Json table = Json::object();
    for (const auto& [id, name] : document.color_names) {
      table[std::to_string(id)] = name;
    }
    metadata["color_names"] = std::move(table);
  }
  if (!metadata.empty()) doc["metadata"] = std::move(metadata);
  return doc;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

inline ColoringDocument load_coloring(const std::string& path) {
  return parse_coloring(read_json_file(path), path);
}

inline void save_coloring(const ColoringDocument& document,
                          const std::string& path) {
  write_text_file(path, coloring_to_json(document).dump(2) + "\n");
}

// Basis files carry every amplitude with 17 significant digits, enough to
// reconstruct each double exactly, and are written by hand to keep the byte
// layout fixed.
inline std::string uob_to_json_text(const Uob& uob,
                                    const Json& metadata = Json::object()) {
  std::ostringstream out;
  out << "{\n  \"schema_version\": 1,\n  \"n\": " << uob.n
      << ",\n  \"states\": [\n";
  for (std::size_t v = 0; v < uob.states.size(); ++v) {
    out << "    [";
    for (int p = 0; p < uob.n; ++p) {
      const QubitRay& ray = uob.states[v].factors[p];
      out << (p ? ", [" : "[") << "["
          << detail::format_double(ray.amp0().real()) << ", "
          << detail::format_double(ray.amp0().imag()) << "], ["
          << detail::format_double(ray.amp1().real()) << ", "
          << detail::format_double(ray.amp1().imag()) << "]]";
    }
    out << (v + 1 < uob.states.size() ? "],\n" : "]\n");
  }
  out << "  ]";
  if (!metadata.empty()) {
    out << ",\n  \"metadata\": " << metadata.dump();
  }
  out << "\n}\n";
  return out.str();
}

inline Uob parse_uob(const Json& doc, const std::string& where = "$") {
  if (!doc.is_object()) throw IoError("expected an object at " + where);
  detail::reject_unknown_fields(
      doc, {"schema_version", "n", "states", "metadata"}, where);
  if (detail::require_field(doc, "schema_version", where) != 1) {
    throw IoError("unsupported schema_version at " + where);
  }
  const Json& jn = detail::require_field(doc, "n", where);
  if (!jn.is_number_integer()) {
    throw IoError("field \"n\" must be an integer at " + where + ".n");
  }
  Uob uob;
  uob.n = jn.get<int>();
  try {
    require_dimension(uob.n);
  } catch (const std::out_of_range& e) {
    throw IoError(std::string(e.what()) + " at " + where + ".n");
  }
  const Json& states = detail::require_field(doc, "states", where);
  if (!states.is_array() || states.size() != vertex_count(uob.n)) {
    throw IoError("expected " + std::to_string(vertex_count(uob.n)) +
                  " states at " + where + ".states");
  }
  for (std::size_t v = 0; v < states.size(); ++v) {
    std::string at = where + ".states[" + std::to_string(v) + "]";
    const Json& factors = states[v];
    if (!factors.is_array() ||
        factors.size() != static_cast<std::size_t>(uob.n)) {
      throw IoError("expected " + std::to_string(uob.n) + " factors at " + at);
    }
    ProductState state;
    for (int p = 0; p < uob.n; ++p) {
      const Json& pair = factors[p];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_array() ||
          !pair[1].is_array() || pair[0].size() != 2 || pair[1].size() != 2) {
        throw IoError("factor must be two [re, im] pairs at " + at + "[" +
                      std::to_string(p) + "]");
      }
      Complex a(pair[0][0].get<double>(), pair[0][1].get<double>());
      Complex b(pair[1][0].get<double>(), pair[1][1].get<double>());
      double norm = std::sqrt(std::norm(a) + std::norm(b));
      if (std::abs(norm - 1.0) > 1e-6) {
        throw IoError("factor is not unit length at " + at + "[" +
                      std::to_string(p) + "]");
      }
      state.factors.emplace_back(a, b);
    }
    uob.states.push_back(std::move(state));
  }
  return uob;
}

inline Uob load_uob(const std::string& path) {
  return parse_uob(read_json_file(path), path);
}

inline void save_uob(const Uob& uob, const std::string& path,
                     const Json& metadata = Json::object()) {
  write_text_file(path, uob_to_json_text(uob, metadata));
}

inline Json ray_to_json(const QubitRay& ray) {
  return Json::array({Json::array({ray.amp0().real(), ray.amp0().imag()}),
                      Json::array({ray.amp1().real(), ray.amp1().imag()})});
}

inline Json protocol_to_json(const ProtocolTree& tree) {
  std::function<Json(int)> emit = [&](int node) -> Json {
    const ProtocolNode& record = tree.nodes.at(node);
    if (record.leaf) return Json{{"vertex", record.vertex}};
    return Json{{"position", record.position},
                {"ray", ray_to_json(*record.ray)},
                {"outcomes", Json::array({emit(record.children[0]),
                                          emit(record.children[1])})}};
  };
  return Json{
      {"schema_version", 1}, {"n", tree.n}, {"root", emit(tree.root)}};
}

inline ProtocolTree protocol_from_json(const Json& doc,
                                       const std::string& where = "$") {
  if (!doc.is_object()) throw IoError("expected an object at " + where);
  detail::reject_unknown_fields(doc, {"schema_version", "n", "root"}, where);
  if (detail::require_field(doc, "schema_version", where) != 1) {
    throw IoError("unsupported schema_version at " + where);
  }
  ProtocolTree tree;
  tree.n = detail::require_field(doc, "n", where).get<int>();
  require_dimension(tree.n);
  std::function<int(const Json&, const std::string&)> build =
      [&](const Json& node, const std::string& at) -> int {
    if (!node.is_object()) throw IoError("expected an object at " + at);
    if (node.contains("vertex")) {
      detail::reject_unknown_fields(node, {"vertex"}, at);
      tree.nodes.push_back(ProtocolNode{
          true, node.at("vertex").get<Vertex>(), -1, std::nullopt, {-1, -1}});
      return static_cast<int>(tree.nodes.size()) - 1;
    }
    detail::reject_unknown_fields(node, {"position", "ray", "outcomes"}, at);
    const Json& ray = detail::require_field(node, "ray", at);
    const Json& outcomes = detail::require_field(node, "outcomes", at);
    if (!outcomes.is_array() || outcomes.size() != 2) {
      throw IoError("expected two outcomes at " + at + ".outcomes");
    }
    QubitRay measured(
        Complex(ray.at(0).at(0).get<double>(), ray.at(0).at(1).get<double>()),
        Complex(ray.at(1).at(0).get<double>(), ray.at(1).at(1).get<double>()));
    int low = build(outcomes[0], at + ".outcomes[0]");
    int high = build(outcomes[1], at + ".outcomes[1]");
    tree.nodes.push_back(
        ProtocolNode{false, 0,
                     detail::require_field(node, "position", at).get<int>(),
                     measured, {low, high}});
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  tree.root = build(detail::require_field(doc, "root", where), where + ".root");
  return tree;
}

inline Json simulation_to_json(const SimulationResult& result) {
  Json steps = Json::array();
  for (const auto& step : result.steps) {
    steps.push_back(Json{{"position", step.position},
                         {"outcome", step.outcome},
                         {"probability", step.probability}});
  }
  return Json{{"secret", result.secret},
              {"steps", std::move(steps)},
              {"identified", result.identified},
              {"certain", result.certain}};
}

namespace detail {

inline Json count_map_to_json(const std::map<int, std::uint64_t>& counts) {
  Json out = Json::object();
  for (const auto& [k, v] : counts) out[std::to_string(k)] = v;
  return out;
}

}  // namespace detail

// Canonical census bytes: everything except the wall time, which would
// break run-to-run byte identity; timing is reported out of band.
inline Json census_to_json(const CensusReport& report) {
  return Json{
      {"schema_version", 1},
      {"n", report.n},
      {"maximal_count_only", report.maximal_count_only},
      {"total_two_face_admissible", report.total_two_face_admissible},
      {"total_admissible", report.total_admissible},
      {"total_up_to_symmetry", report.total_up_to_symmetry},
      {"orbit_size_sum", report.orbit_size_sum},
      {"max_colors_seen", report.max_colors_seen},
      {"by_color_count", detail::count_map_to_json(report.by_color_count)},
      {"maximal_by_color_count",
       detail::count_map_to_json(report.maximal_by_color_count)},
      {"symmetry_classes_by_color_count",
       detail::count_map_to_json(report.symmetry_classes_by_color_count)},
      {"maximal_symmetry_classes_by_color_count",
       detail::count_map_to_json(report.maximal_symmetry_classes_by_color_count)},
      {"c_n", report.c_n},
      {"search_nodes", report.search_nodes}};
}

inline Json min_colors_to_json(const MinColorsResult& result) {
  Json doc{{"n", result.n}, {"exact", result.exact}};
  if (result.exact) {
    doc["value"] = result.value;
  } else {
    doc["lower"] = result.lower;
    doc["upper"] = result.upper;
    doc["constructive_upper"] = result.constructive_upper;
    doc["witness_description"] = result.witness_description;
  }
  return doc;
}

inline Json theorem_checks_to_json(const TheoremChecks& checks) {
  Json entries = Json::array();
  for (const auto& entry : checks.entries) {
    Json row{{"name", entry.name},
             {"pass", entry.pass},
             {"checked", entry.checked}};
    if (!entry.counterexample.empty()) {
      row["counterexample"] = entry.counterexample;
    }
    entries.push_back(std::move(row));
  }
  return Json{{"n", checks.n},
              {"entries", std::move(entries)},
              {"all_pass", checks.all_pass}};
}

// GraphViz text with one line per vertex and per edge, edges in index order.
// Named colors are used verbatim; anonymous ids get well-spaced HSV values,
// so any two ids always render distinguishably.
inline std::string export_dot(const EdgeColoring& c,
                              const std::map<int, std::string>& names = {}) {
  require_dimension(c.n(), 1, 6);
  std::vector<int> palette = c.palette();
  std::map<int, std::string> style;
  for (std::size_t rank = 0; rank < palette.size(); ++rank) {
    auto it = names.find(palette[rank]);
    if (it != names.end()) {
      style[palette[rank]] = it->second;
    } else {
      double hue = std::fmod(0.618033988749895 * static_cast<double>(rank), 1.0);
      char buffer[32];
      std::snprintf(buffer, sizeof(buffer), "%.6f 0.75 0.80", hue);
      style[palette[rank]] = buffer;
    }
  }
  std::ostringstream out;
  out << "graph coloring {\n"
      << "  node [shape=circle, fontsize=10];\n";
  Hypercube cube{c.n()};
  for (Vertex v = 0; v < cube.vertices(); ++v) {
    out << "  " << v << ";\n";
  }
  for (const auto& e : edges(cube)) {
    out << "  " << e.base << " -- " << e.other() << " [color=\""
        << style.at(c.color(e)) << "\", penwidth=2];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace uob
