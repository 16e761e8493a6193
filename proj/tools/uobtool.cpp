// Command line front end: inspect and transform edge colorings, build
// bases, and run the distinguishability pipeline end to end.
//
// Exit codes: 0 on success, 1 when a check or verification fails (a JSON
// diagnostic goes to stdout), 2 for usage errors.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "uob/io.hpp"

namespace {

using uob::Json;

struct CheckFailure {
  Json diagnostics;
};

void emit(const Json& doc, const std::string& output) {
  std::string text = doc.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    uob::write_text_file(output, text);
  }
}

void emit_text(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
  } else {
    uob::write_text_file(output, text);
  }
}

Json word_json(const uob::EdgeColoring& c) {
  return Json(c.word());
}

uob::ColoringDocument construct_named(const std::string& kind, int n,
                                      const std::string& fixture_name,
                                      const std::string& input,
                                      const std::string& second) {
  uob::ColoringDocument doc;
  Json generator{{"kind", kind}};
  if (kind == "max") {
    doc.coloring = uob::construct_max(n);
    generator["n"] = n;
  } else if (kind == "bdf") {
    doc.coloring = uob::generalized_bdf(n);
    generator["n"] = n;
  } else if (kind == "minimal") {
    doc.coloring = uob::minimal_coloring(n);
    generator["n"] = n;
  } else if (kind == "fixture") {
    doc.coloring = uob::fixture(fixture_name);
    doc.color_names = uob::name_table(uob::fixture_color_names(fixture_name));
    generator["name"] = fixture_name;
  } else if (kind == "cone") {
    uob::ColoringDocument a = uob::load_coloring(input);
    uob::ColoringDocument b =
        second.empty() ? a : uob::load_coloring(second);
    doc.coloring = uob::cone(a.coloring, b.coloring);
    generator["input"] = input;
    generator["second"] = second.empty() ? input : second;
  } else if (kind == "double") {
    uob::ColoringDocument a = uob::load_coloring(input);
    doc.coloring = uob::doubling(a.coloring);
    generator["input"] = input;
  }
  doc.metadata["generator"] = std::move(generator);
  return doc;
}

int run(int argc, char** argv) {
  CLI::App app{
      "admissible hypercube edge colorings and the unentangled bases they "
      "generate"};
  app.require_subcommand(1);

  std::string input, second, output, fixture_name = "fig1", coloring_path;
  std::string checkpoint, rule = "anchored", protocol_out, witness_out;
  int n = 0;
  int workers = 1;
  std::uint64_t seed = 0, node_budget = 0;
  double time_budget = 0.0, min_separation = 0.1, tolerance = 0.0;
  long long secret = -1;
  bool up_to_symmetry = false, maximal_only = false, census = false;
  bool all_secrets = false;

  // check <coloring.json>
  CLI::App* check = app.add_subcommand(
      "check", "validate a coloring file and report its headline properties");
  check->add_option("input", input, "coloring document")->required();

  // enumerate --n N [--census ...]
  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "list admissible colorings, or run the full census");
  enumerate->add_option("--n", n, "cube dimension")->required();
  enumerate->add_flag("--up-to-symmetry", up_to_symmetry,
                      "one representative per symmetry class");
  enumerate->add_flag("--maximal-only", maximal_only,
                      "restrict the search to colorings at the color bound");
  enumerate->add_flag("--census", census,
                      "emit aggregate counts instead of the colorings");
  enumerate->add_option("--workers", workers, "parallel search workers")
      ->envname("UOBTOOL_WORKERS");
  enumerate->add_option("--time-budget", time_budget,
                        "stop the census after this many seconds");
  enumerate->add_option("--node-budget", node_budget,
                        "stop the census after this many search nodes");
  enumerate->add_option("--checkpoint", checkpoint,
                        "checkpoint file for interrupted census runs");
  enumerate->add_option("--output", output, "write JSON here instead of stdout");

  // construct <kind> ...
  CLI::App* construct =
      app.add_subcommand("construct", "build one of the known colorings");
  construct->require_subcommand(1);
  std::map<std::string, CLI::App*> kinds;
  kinds["max"] = construct->add_subcommand(
      "max", "coloring with the maximum number of colors");
  kinds["bdf"] = construct->add_subcommand(
      "bdf", "few-color maximal coloring from dominant direction patterns");
  kinds["minimal"] =
      construct->add_subcommand("minimal", "single color everywhere");
  kinds["fixture"] =
      construct->add_subcommand("fixture", "one of the bundled examples");
  kinds["cone"] = construct->add_subcommand(
      "cone", "join two colorings across a fresh direction");
  kinds["double"] = construct->add_subcommand(
      "double", "two differently colored copies of the input");
  for (auto& [kind, cmd] : kinds) {
    cmd->add_option("--output", output, "write the coloring here");
    if (kind == "max" || kind == "bdf" || kind == "minimal") {
      cmd->add_option("--n", n, "cube dimension")->required();
    } else if (kind == "fixture") {
      cmd->add_option("--name", fixture_name, "fig1, fig2, or bdf4")
          ->required();
    } else {
      cmd->add_option("--input", input, "coloring document")->required();
      if (kind == "cone") {
        cmd->add_option("--second", second,
                        "second coloring (defaults to the first)");
      }
    }
  }

  // classify <coloring.json>
  CLI::App* classify = app.add_subcommand(
      "classify", "full structural report for a coloring");
  classify->add_option("input", input, "coloring document")->required();

  // synthesize --input c.json --seed S
  CLI::App* synthesize = app.add_subcommand(
      "synthesize", "sample factor rays and write the product basis");
  synthesize->add_option("--input", input, "coloring document")->required();
  synthesize->add_option("--seed", seed, "RNG seed")->required();
  synthesize->add_option("--min-separation", min_separation,
                         "rejection threshold between sampled rays");
  synthesize->add_option("--tolerance", tolerance,
                         "orthogonality tolerance for the final verification");
  synthesize->add_option("--output", output, "write the basis here");

  // recover --input uob.json
  CLI::App* recover = app.add_subcommand(
      "recover", "rebuild the coloring from a basis file");
  recover->add_option("--input", input, "basis file")->required();
  recover->add_option("--rule", rule,
                      "orientation rule: anchored or lexicographic")
      ->check(CLI::IsMember({"anchored", "lexicographic"}));
  recover->add_option("--tolerance", tolerance, "ray equality tolerance");
  recover->add_option("--output", output, "write the coloring here");

  // simulate --coloring c.json --seed S --secret V
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run the one-way measurement protocol on a sampled basis");
  simulate->add_option("--coloring", coloring_path, "coloring document")
      ->required();
  simulate->add_option("--seed", seed, "RNG seed for the sampled rays")
      ->required();
  CLI::Option* secret_opt =
      simulate->add_option("--secret", secret, "basis state to identify");
  simulate->add_flag("--all-secrets", all_secrets,
                     "run every basis state through the protocol")
      ->excludes(secret_opt);
  simulate->add_option("--min-separation", min_separation,
                       "rejection threshold between sampled rays");
  simulate->add_option("--tolerance", tolerance,
                       "certainty tolerance for branch probabilities");
  simulate->add_option("--protocol-out", protocol_out,
                       "also write the measurement tree here");
  simulate->add_option("--output", output, "write results here");

  // min-colors --n N
  CLI::App* min_colors_cmd = app.add_subcommand(
      "min-colors", "fewest colors of a maximal coloring: exact value or bounds");
  min_colors_cmd->add_option("--n", n, "cube dimension")->required();
  min_colors_cmd->add_option("--witness", witness_out,
                             "write the witness coloring here");
  min_colors_cmd->add_option("--output", output, "write JSON here");

  // verify-theorems --n N
  CLI::App* verify = app.add_subcommand(
      "verify-theorems", "exhaustively check the structure theorems");
  verify->add_option("--n", n, "cube dimension (2 or 3)")->required();
  verify->add_option("--output", output, "write JSON here");

  // export-dot --input c.json
  CLI::App* export_cmd = app.add_subcommand(
      "export-dot", "GraphViz drawing of a coloring");
  export_cmd->add_option("--input", input, "coloring document")->required();
  export_cmd->add_option("--output", output, "write DOT text here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed()) {
    uob::ColoringDocument doc = uob::load_coloring(input);
    Json report{{"n", doc.coloring.n()},
                {"colors", doc.coloring.color_count()},
                {"two_face_admissible",
                 uob::is_two_face_admissible(doc.coloring)},
                {"admissible", uob::is_admissible(doc.coloring)}};
    if (!report["admissible"]) {
      throw CheckFailure{std::move(report)};
    }
    report["maximal"] = uob::is_maximal(doc.coloring);
    report["locc_distinguishable"] =
        uob::is_locc_distinguishable(doc.coloring);
    emit(report, output);
    return 0;
  }

  if (enumerate->parsed()) {
    if (census) {
      uob::CensusOptions options;
      options.maximal_count_only = maximal_only;
      options.workers = workers;
      options.time_budget_seconds = time_budget;
      options.node_budget = node_budget;
      options.checkpoint_path = checkpoint;
      uob::CensusReport report = uob::run_census(n, options);
      std::cerr << "census wall time: " << report.wall_seconds << " s\n";
      emit(uob::census_to_json(report), output);
      return 0;
    }
    Json list = Json::array();
    uob::enumerate_admissible(
        n, up_to_symmetry,
        [&](const uob::EdgeColoring& c) {
          list.push_back(word_json(c));
          return true;
        },
        maximal_only);
    emit(Json{{"n", n},
              {"up_to_symmetry", up_to_symmetry},
              {"maximal_only", maximal_only},
              {"count", list.size()},
              {"colorings", std::move(list)}},
         output);
    return 0;
  }

  if (construct->parsed()) {
    for (auto& [kind, cmd] : kinds) {
      if (!cmd->parsed()) continue;
      uob::ColoringDocument doc =
          construct_named(kind, n, fixture_name, input, second);
      if (output.empty()) {
        emit(uob::coloring_to_json(doc), output);
      } else {
        uob::save_coloring(doc, output);
      }
      return 0;
    }
  }

  if (classify->parsed()) {
    uob::ColoringDocument doc = uob::load_coloring(input);
    const uob::EdgeColoring& c = doc.coloring;
    Json report{{"n", c.n()},
                {"colors", c.color_count()},
                {"two_face_admissible", uob::is_two_face_admissible(c)},
                {"admissible", uob::is_admissible(c)}};
    if (!report["admissible"]) {
      throw CheckFailure{std::move(report)};
    }
    std::optional<int> uniform = uob::uniform_direction(c);
    report["uniform_direction"] = uniform ? Json(*uniform) : Json(nullptr);
    std::optional<uob::RefinementWitness> finer = uob::find_refinement(c);
    report["maximal"] = !finer.has_value();
    if (finer) {
      report["refines_to_colors"] = finer->finer.color_count();
    }
    report["max_family"] = uob::is_max_family(c);
    report["locc_distinguishable"] = uob::is_locc_distinguishable(c);
    if (report["max_family"]) {
      Json forest = Json::array();
      for (const auto& e : uob::extract_forest(c).edges) {
        forest.push_back(Json::array({e.base, e.other()}));
      }
      report["color_forest"] = std::move(forest);
    }
    emit(report, output);
    return 0;
  }

  if (synthesize->parsed()) {
    uob::ColoringDocument doc = uob::load_coloring(input);
    uob::SampledAssignment sampled =
        uob::sample_assignment(doc.coloring, seed, min_separation);
    uob::Uob basis = uob::synthesize(doc.coloring, sampled.assignment);
    uob::Tolerances tolerances;
    if (tolerance > 0) tolerances.gram_pass = tolerance;
    uob::VerifyReport verdict = uob::verify_uob(basis, tolerances);
    if (!verdict.pass) {
      throw CheckFailure{Json{{"error", "synthesized basis failed verification"},
                              {"max_overlap", verdict.max_overlap}}};
    }
    Json rays = Json::object();
    for (const auto& [color, ray] : sampled.assignment.rays) {
      rays[std::to_string(color)] = uob::ray_to_json(ray);
    }
    Json metadata{{"generator",
                   Json{{"kind", "synthesize"},
                        {"input", input},
                        {"seed", seed},
                        {"min_separation", min_separation},
                        {"rejections", sampled.rejections}}},
                  {"tolerance", tolerances.gram_pass},
                  {"max_overlap", verdict.max_overlap},
                  {"color_rays", std::move(rays)}};
    emit_text(uob::uob_to_json_text(basis, metadata), output);
    return 0;
  }

  if (recover->parsed()) {
    uob::Uob basis = uob::load_uob(input);
    uob::Tolerances tolerances;
    if (tolerance > 0) tolerances.ray_eq = tolerance;
    uob::T0Rule t0 = rule == "lexicographic" ? uob::T0Rule::lexicographic
                                             : uob::T0Rule::anchored;
    uob::RecoveryResult result = uob::recover_coloring(basis, t0, tolerances);
    uob::ColoringDocument doc;
    doc.coloring = result.coloring;
    doc.metadata["generator"] =
        Json{{"kind", "recover"}, {"input", input}, {"rule", rule}};
    doc.metadata["state_to_vertex"] = Json(result.state_to_vertex);
    if (output.empty()) {
      emit(uob::coloring_to_json(doc), output);
    } else {
      uob::save_coloring(doc, output);
    }
    return 0;
  }

  if (simulate->parsed()) {
    uob::ColoringDocument doc = uob::load_coloring(coloring_path);
    uob::SampledAssignment sampled =
        uob::sample_assignment(doc.coloring, seed, min_separation);
    uob::Uob basis = uob::synthesize(doc.coloring, sampled.assignment);
    uob::ProtocolTree tree;
    try {
      tree = uob::extract_protocol(doc.coloring, sampled.assignment);
    } catch (const std::invalid_argument& e) {
      throw CheckFailure{Json{{"error", e.what()},
                              {"locc_distinguishable", false}}};
    }
    if (!protocol_out.empty()) {
      uob::write_text_file(protocol_out,
                           uob::protocol_to_json(tree).dump(2) + "\n");
    }
    uob::Tolerances tolerances;
    if (tolerance > 0) tolerances.certainty = tolerance;

    if (all_secrets) {
      Json runs = Json::array();
      bool all_certain = true;
      for (uob::Vertex v = 0; v < uob::vertex_count(doc.coloring.n()); ++v) {
        uob::SimulationResult result = uob::simulate(basis, tree, v, tolerances);
        all_certain = all_certain && result.certain;
        runs.push_back(uob::simulation_to_json(result));
      }
      Json report{{"seed", seed},
                  {"runs", std::move(runs)},
                  {"all_certain", all_certain}};
      if (!all_certain) throw CheckFailure{std::move(report)};
      emit(report, output);
      return 0;
    }
    if (secret < 0) {
      std::cerr << "simulate: provide --secret or --all-secrets\n";
      return 2;
    }
    uob::SimulationResult result = uob::simulate(
        basis, tree, static_cast<uob::Vertex>(secret), tolerances);
    Json row = uob::simulation_to_json(result);
    row["seed"] = seed;
    if (!result.certain) throw CheckFailure{std::move(row)};
    emit(row, output);
    return 0;
  }

  if (min_colors_cmd->parsed()) {
    uob::MinColorsResult result = uob::min_colors(n);
    if (!witness_out.empty() && result.witness) {
      uob::ColoringDocument doc;
      doc.coloring = *result.witness;
      doc.metadata["generator"] = Json{{"kind", "min-colors witness"},
                                       {"n", n},
                                       {"description",
                                        result.witness_description}};
      uob::save_coloring(doc, witness_out);
    }
    emit(uob::min_colors_to_json(result), output);
    return 0;
  }

  if (verify->parsed()) {
    uob::TheoremChecks checks = uob::verify_extremal_theorems(n);
    emit(uob::theorem_checks_to_json(checks), output);
    if (!checks.all_pass) return 1;
    return 0;
  }

  if (export_cmd->parsed()) {
    uob::ColoringDocument doc = uob::load_coloring(input);
    emit_text(uob::export_dot(doc.coloring, doc.color_names), output);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CheckFailure& failure) {
    std::cout << failure.diagnostics.dump(2) << "\n";
    return 1;
  } catch (const uob::IoError& e) {
    std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
    return 1;
  } catch (const uob::BudgetExceeded& e) {
    std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
    return 1;
  } catch (const uob::RecoveryError& e) {
    std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
    return 1;
  }
}
