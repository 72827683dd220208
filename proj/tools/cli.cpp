#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "rhetor/capacity_metrics.hpp"
#include "rhetor/document_analysis.hpp"
#include "rhetor/entropy_analysis.hpp"
#include "rhetor/errors.hpp"
#include "rhetor/mode_registry.hpp"
#include "rhetor/operator_calculus.hpp"
#include "rhetor/pyramid_mapping.hpp"

namespace rhetor::cli {

namespace {

using json = nlohmann::json;

// A command's result: named tables of cells. Table and CSV output render
// cells as text; JSON keeps them typed.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Report {
  std::string command;
  std::vector<Table> tables;
  std::string raw;  // printed verbatim instead of tables (document exports)
};

json exact_cell(Exact value) {
  if (value <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(value);
  return to_string(value);
}

json id_list(const std::vector<ModeId>& ids) {
  json out = json::array();
  for (const ModeId& id : ids) out.push_back(id.str());
  return out;
}

json string_list(const std::vector<std::string>& items) { return json(items); }

std::string cell_text(const json& cell) {
  switch (cell.type()) {
    case json::value_t::null:
      return "";
    case json::value_t::string:
      return cell.get<std::string>();
    case json::value_t::boolean:
      return cell.get<bool>() ? "true" : "false";
    case json::value_t::number_float: {
      char buffer[64];
      std::snprintf(buffer, sizeof buffer, "%.4f", cell.get<double>());
      return buffer;
    }
    case json::value_t::array: {
      std::string out;
      for (const json& item : cell) {
        if (!out.empty()) out += ' ';
        out += cell_text(item);
      }
      return out;
    }
    default:
      return cell.dump();
  }
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void render_text(const Report& report, std::ostream& out) {
  for (std::size_t t = 0; t < report.tables.size(); ++t) {
    const Table& table = report.tables[t];
    if (report.tables.size() > 1) out << (t ? "\n" : "") << "[" << table.name << "]\n";
    std::vector<std::size_t> widths;
    for (const std::string& column : table.columns) widths.push_back(column.size());
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : table.rows) {
      auto& line = cells.emplace_back();
      for (std::size_t c = 0; c < row.size(); ++c) {
        line.push_back(cell_text(row[c]));
        widths[c] = std::max(widths[c], line.back().size());
      }
    }
    const auto emit = [&](const std::vector<std::string>& line, const std::vector<json>* typed) {
      std::string text;
      for (std::size_t c = 0; c < line.size(); ++c) {
        const bool numeric = typed && (*typed)[c].is_number();
        const std::string pad(widths[c] - line[c].size(), ' ');
        if (c) text += "  ";
        text += numeric ? pad + line[c] : line[c] + (c + 1 < line.size() ? pad : "");
      }
      out << text << "\n";
    };
    emit(table.columns, nullptr);
    std::string rule;
    for (std::size_t c = 0; c < widths.size(); ++c) rule += (c ? "  " : "") + std::string(widths[c], '-');
    out << rule << "\n";
    for (std::size_t r = 0; r < cells.size(); ++r) emit(cells[r], &table.rows[r]);
  }
}

void render_csv(const Report& report, std::ostream& out) {
  for (std::size_t t = 0; t < report.tables.size(); ++t) {
    const Table& table = report.tables[t];
    if (report.tables.size() > 1) out << (t ? "\n" : "") << "# " << table.name << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << csv_field(table.columns[c]);
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(cell_text(row[c]));
      out << "\n";
    }
  }
}

void render_json(const Report& report, std::ostream& out) {
  json document{{"command", report.command}};
  for (const Table& table : report.tables) {
    json rows = json::array();
    for (const auto& row : table.rows) {
      json object = json::object();
      for (std::size_t c = 0; c < row.size(); ++c) object[table.columns[c]] = row[c];
      rows.push_back(std::move(object));
    }
    document[table.name] = std::move(rows);
  }
  out << document.dump(2) << "\n";
}

void render(const Report& report, const std::string& format, std::ostream& out) {
  if (!report.raw.empty()) {
    out << report.raw;
    return;
  }
  if (format == "csv") {
    render_csv(report, out);
  } else if (format == "json") {
    render_json(report, out);
  } else {
    render_text(report, out);
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Registry active_registry(const std::string& path) {
  if (!path.empty()) return load_registry_file(path);
  if (const char* env = std::getenv("RHETOR_REGISTRY"); env && *env) return load_registry_file(env);
  return Registry::builtin();
}

// Thrown for flag combinations CLI11 cannot express; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- tables / capacity -----------------------------------------------------

struct TablesArgs {
  unsigned max_k = 30;
};

Report cmd_tables(const TablesArgs& args) {
  Table table{"table3", {"K", "k_m", "K_max", "K_NRC"}, {}};
  for (const CapacityReport& row : capacity_table(args.max_k)) {
    table.rows.push_back({row.width, row.peak_subset_size, exact_cell(row.peak_combinations),
                          exact_cell(row.nonempty_combinations)});
  }
  return {"tables", {std::move(table)}, {}};
}

struct CapacityArgs {
  unsigned k = 0;
  std::optional<unsigned> ratio_to;
  std::optional<unsigned> used;
  std::optional<double> rate;
  double c0 = 1.0;
};

Report cmd_capacity(const CapacityArgs& args) {
  Report report{"capacity", {}, {}};
  const CapacityReport c = capacity(args.k);
  report.tables.push_back({"capacity",
                           {"K", "k_m", "K_max", "K_NRC", "K_RC", "MRB"},
                           {{c.width, c.peak_subset_size, exact_cell(c.peak_combinations),
                             exact_cell(c.nonempty_combinations), c.capacity_bits, c.marginal_bits}}});
  if (args.ratio_to) {
    report.tables.push_back(
        {"ratio", {"K1", "K2", "ratio"}, {{args.k, *args.ratio_to, capacity_ratio(args.k, *args.ratio_to)}}});
  }
  if (args.used) {
    const CoverageReport cov = coverage(*args.used, args.k);
    report.tables.push_back({"coverage",
                             {"K_u", "K", "C_m", "band"},
                             {{cov.used, cov.available, cov.coverage, std::string(coverage_band_name(cov.band))}}});
  }
  if (args.rate) {
    const GrowthParams g = growth(*args.rate, args.c0);
    report.tables.push_back({"growth",
                             {"L_n", "C_0", "R_scale", "R_scale_norm", "load"},
                             {{g.introduction_rate, g.learner_capacity, g.scale_bits, g.normalized_load,
                               std::string(load_class_name(g.load))}}});
  }
  return report;
}

// ---- entropy ---------------------------------------------------------------

struct EntropyArgs {
  std::optional<unsigned> k;
  std::vector<unsigned> layers;
  std::optional<unsigned> flat;
  std::vector<double> probabilities;
};

Report cmd_entropy(const EntropyArgs& args) {
  if (!args.k && args.layers.empty() && args.probabilities.empty()) {
    throw UsageError("entropy needs --k, --layers with --flat, or --probs");
  }
  if (!args.layers.empty() && !args.flat) throw UsageError("--layers requires --flat");
  Report report{"entropy", {}, {}};
  if (args.k) {
    const EntropyReport e = entropy_subset_sizes(*args.k);
    report.tables.push_back({"entropy",
                             {"K", "H_flat", "H_subset", "H_asymptotic", "gap"},
                             {{e.width, e.flat_bits, e.subset_bits, e.asymptotic_bits, e.gap}}});
  }
  if (!args.layers.empty()) {
    std::vector<LayerBranching> branchings;
    for (std::size_t i = 0; i < args.layers.size(); ++i) {
      branchings.push_back({"layer " + std::to_string(i + 1), args.layers[i]});
    }
    const LayeredEntropyReport layered = entropy_layered(branchings, *args.flat);
    Table stages{"layers", {"layer", "branching", "H_subset"}, {}};
    for (const StageEntropy& s : layered.stages) stages.rows.push_back({s.name, s.branching, s.bits});
    report.tables.push_back(std::move(stages));
    report.tables.push_back({"layered_summary",
                             {"flat_K", "H_flat_subset", "max_stage", "sum_stages"},
                             {{layered.flat_width, layered.flat_bits, layered.max_stage_bits,
                               layered.sum_stage_bits}}});
  }
  if (!args.probabilities.empty()) {
    report.tables.push_back(
        {"distribution", {"outcomes", "H"}, {{args.probabilities.size(), entropy_flat(args.probabilities)}}});
  }
  return report;
}

// ---- derive ----------------------------------------------------------------

struct DeriveArgs {
  std::vector<std::string> ops;
  std::size_t depth = 1;
  std::string registry;
  std::string rules;
  bool atoms_only_base = false;
  std::string apply;
  std::vector<std::string> inputs;
};

std::vector<json> derivation_row(const Derivation& d) {
  std::vector<ModeId> results;
  bool rediscovery = true;
  for (const Generated& g : d.results) {
    results.push_back(g.mode.id);
    rediscovery = rediscovery && g.rediscovery;
  }
  return {d.depth, std::string(operator_name(d.op)), id_list(d.inputs), id_list(results), rediscovery};
}

Report cmd_derive(const DeriveArgs& args) {
  Registry registry = active_registry(args.registry);
  if (args.atoms_only_base) {
    registry = registry.subset([](const Mode& m) { return m.origin.kind == OriginKind::base; });
  }
  const DualityRuleSet rules = args.rules.empty() ? DualityRuleSet::defaults() : load_rules(read_text(args.rules));

  Table table{"derivations", {"depth", "operator", "inputs", "results", "rediscovery"}, {}};
  if (!args.apply.empty()) {
    const OperatorKind op = parse_operator(args.apply);
    if (args.inputs.size() != operator_arity(op)) {
      throw UsageError(std::string(operator_name(op)) + " takes " + std::to_string(operator_arity(op)) +
                       " input(s)");
    }
    Derivation d{op, {}, {}, 1};
    switch (op) {
      case OperatorKind::split: {
        auto [a, b] = split(registry, args.inputs[0]);
        d.results = {{a, true}, {b, true}};
        break;
      }
      case OperatorKind::unite:
        d.results = {unite(registry, args.inputs[0], args.inputs[1])};
        break;
      case OperatorKind::forward_backward:
        d.results = {forward_backward(registry, rules, args.inputs[0])};
        break;
      case OperatorKind::expand:
        d.results = {expand(registry, rules, args.inputs[0])};
        break;
      case OperatorKind::reduce:
        d.results = {reduce(registry, rules, args.inputs[0])};
        break;
      case OperatorKind::orthogonal:
        d.results = {orthogonal(registry, rules, args.inputs[0])};
        break;
    }
    for (const std::string& input : args.inputs) {
      const Mode* mode = registry.find(input);
      d.inputs.push_back(mode ? mode->id : ModeId(input));
    }
    table.rows.push_back(derivation_row(d));
  } else {
    if (args.ops.empty()) throw UsageError("derive needs --ops or --apply");
    std::set<OperatorKind> ops;
    for (const std::string& name : args.ops) ops.insert(parse_operator(name));
    for (const Derivation& d : closure(registry, rules, ops, args.depth)) table.rows.push_back(derivation_row(d));
  }
  return {"derive", {std::move(table)}, {}};
}

// ---- map -------------------------------------------------------------------

struct MapArgs {
  std::string profile = "default";
  std::string file;
  std::string registry;
  std::string realizers_of;
  std::string compose;
  bool branching = false;
  std::string academic;
  bool export_document = false;
};

Layer parse_layer(std::string_view text) {
  if (text == "C" || text == "c") return Layer::C;
  if (text == "E" || text == "e") return Layer::E;
  throw UsageError("layer must be C or E, got '" + std::string(text) + "'");
}

Report cmd_map(const MapArgs& args) {
  const Registry registry = active_registry(args.registry);
  const PyramidGraph graph =
      args.file.empty() ? load_pyramid(registry, args.profile) : load_pyramid_document(registry, read_text(args.file));
  Report report{"map", {}, {}};

  if (args.export_document) {
    report.raw = serialize_pyramid(graph);
    return report;
  }

  bool queried = false;
  if (!args.realizers_of.empty()) {
    queried = true;
    const auto colon = args.realizers_of.find(':');
    if (colon == std::string::npos) throw UsageError("--realizers expects LAYER:ID, e.g. C:observe");
    const Layer layer = parse_layer(args.realizers_of.substr(0, colon));
    const std::string id = args.realizers_of.substr(colon + 1);
    Table table{"realizers", {"layer", "node", "realizer", "display_name"}, {}};
    const LayerNode* upper = graph.node(layer, id);
    for (const LayerNode& node : realizers(graph, layer, id)) {
      table.rows.push_back({std::string(layer_name(layer)), upper->id, node.id, node.display_name});
    }
    report.tables.push_back(std::move(table));
  }

  if (!args.compose.empty()) {
    queried = true;
    Table table{"compose_re", {"epistemic", "modes", "count"}, {}};
    std::vector<std::string> targets;
    if (args.compose == "all") {
      for (const LayerNode& node : graph.nodes(Layer::E)) targets.push_back(node.id);
    } else {
      targets.push_back(args.compose);
    }
    for (const std::string& target : targets) {
      const std::vector<ModeId> modes = compose_re(graph, target);
      table.rows.push_back({graph.node(Layer::E, target)->id, id_list(modes), modes.size()});
    }
    report.tables.push_back(std::move(table));
  }

  if (args.branching) {
    queried = true;
    const BranchingStats stats = branching_stats(graph);
    Table nodes{"out_degree", {"layer", "node", "out_degree"}, {}};
    for (const NodeDegree& d : stats.nodes) nodes.rows.push_back({std::string(layer_name(d.layer)), d.id, d.out_degree});
    Table layers{"layers", {"edge_layer", "nodes", "max_out_degree", "mean_out_degree"}, {}};
    layers.rows.push_back({"C->R", stats.c_layer.nodes, stats.c_layer.max_out_degree, stats.c_layer.mean_out_degree});
    layers.rows.push_back({"E->C", stats.e_layer.nodes, stats.e_layer.max_out_degree, stats.e_layer.mean_out_degree});
    report.tables.push_back(std::move(nodes));
    report.tables.push_back(std::move(layers));
  }

  if (!args.academic.empty()) {
    queried = true;
    Table table{"academic", {"function", "mode", "core", "supplements"}, {}};
    bool matched = false;
    for (const AcademicFunction& function : builtin_academic_functions()) {
      if (args.academic != "all" && node_key(function.name) != node_key(args.academic)) continue;
      matched = true;
      const Mode mode = compose_academic(registry, function);
      std::vector<ModeId> supplements(mode.constituents.begin() + 1, mode.constituents.end());
      table.rows.push_back({function.name, mode.id.str(), mode.constituents.front().str(), id_list(supplements)});
    }
    if (!matched) throw Error(ErrorKind::UnknownNode, "no academic function named '" + args.academic + "'");
    report.tables.push_back(std::move(table));
  }

  if (!queried) {
    Table edges{"edges", {"upper_layer", "upper", "lower"}, {}};
    for (const auto& [upper, lower] : graph.edges_cr()) edges.rows.push_back({"C", upper, lower});
    for (const auto& [upper, lower] : graph.edges_ec()) edges.rows.push_back({"E", upper, lower});
    report.tables.push_back({"summary",
                             {"profile", "R_nodes", "C_nodes", "E_nodes", "C_R_edges", "E_C_edges"},
                             {{graph.profile(), graph.nodes(Layer::R).size(), graph.nodes(Layer::C).size(),
                               graph.nodes(Layer::E).size(), graph.edges_cr().size(), graph.edges_ec().size()}}});
    report.tables.push_back(std::move(edges));
  }
  return report;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::vector<std::string> files;
  std::optional<unsigned> width;
  std::string map;
  std::string profile = "default";
  std::string graph_file;
  std::string registry;
  bool rri = false;
  std::vector<double> at;
};

Report cmd_analyze(const AnalyzeArgs& args) {
  const Registry registry = active_registry(args.registry);
  Report report{"analyze", {}, {}};

  if (args.rri) {
    if (!args.at.empty() && args.at.size() != args.files.size()) {
      throw UsageError("--at needs one stage index per file");
    }
    std::vector<StagedDocument> corpus;
    for (std::size_t i = 0; i < args.files.size(); ++i) {
      corpus.push_back({args.at.empty() ? static_cast<double>(i) : args.at[i],
                        parse_document_file(registry, args.files[i])});
    }
    const RriReport rri = estimate_rri(corpus);
    Table intervals{"rri", {"from", "to", "introduced", "new_modes", "L_n"}, {}};
    for (const RriInterval& interval : rri.intervals) {
      intervals.rows.push_back(
          {interval.from, interval.to, interval.introduced.size(), id_list(interval.introduced), interval.rate});
    }
    Table cumulative{"cumulative", {"stage", "K"}, {}};
    for (const auto& [stage, k] : rri.cumulative) cumulative.rows.push_back({stage, k});
    report.tables.push_back(std::move(intervals));
    report.tables.push_back(std::move(cumulative));
    return report;
  }

  if (args.files.size() != 1) throw UsageError("analyze takes one document unless --rri is given");
  const AnnotatedDocument document = parse_document_file(registry, args.files.front());
  const CoverageReport cov = analyze_coverage(document, args.width);
  report.tables.push_back({"coverage",
                           {"document", "K_u", "K", "C_m", "band", "modes"},
                           {{document.id, cov.used, cov.available, cov.coverage,
                             std::string(coverage_band_name(cov.band)), id_list(document.used_modes())}}});

  if (!args.map.empty()) {
    const PyramidGraph graph = args.graph_file.empty() ? load_pyramid(registry, args.profile)
                                                       : load_pyramid_document(registry, read_text(args.graph_file));
    const std::vector<StageMapping> stage_map = load_stage_map(read_text(args.map));
    const LayerTrace trace = trace_layers(document, graph, stage_map);
    Table table{"trace",
                {"stage", "cognitive", "epistemic", "observed", "expected", "overlap", "mismatch", "unused",
                 "cognitive_outside_epistemic"},
                {}};
    for (const StageTrace& s : trace.stages) {
      table.rows.push_back({s.stage, string_list(s.cognitive), s.epistemic, id_list(s.observed),
                            id_list(s.expected), id_list(s.overlap), id_list(s.mismatch), id_list(s.unused),
                            string_list(s.cognitive_outside_epistemic)});
    }
    report.tables.push_back(std::move(table));
  }
  return report;
}

// ---- cone ------------------------------------------------------------------

struct ConeArgs {
  std::string schedule;
  double c0 = 1.0;
};

Report cmd_cone(const ConeArgs& args) {
  const StageSchedule schedule = args.schedule.empty() ? default_schedule() : load_schedule(read_text(args.schedule));
  Table table{"cone", {"stage", "K", "K_NRC", "K_RC", "L_n", "R_scale", "R_scale_norm", "load", "reference"}, {}};
  const std::vector<ConeRow> rows = cone(schedule, args.c0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConeRow& row = rows[i];
    table.rows.push_back({row.stage, row.width, exact_cell(row.nonempty_combinations), row.capacity_bits,
                          schedule.stages[i].rate, row.scale_bits, row.normalized_load,
                          std::string(load_class_name(row.load)), schedule.stages[i].reference});
  }
  return {"cone", {std::move(table)}, {}};
}

std::string operator_check(const std::string& name) {
  try {
    parse_operator(name);
    return {};
  } catch (const Error&) {
    return "unknown operator '" + name + "' (split, unite, fb, expand, reduce, ortho)";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rhetorical mode calculus: capacity, entropy, operators, layer mapping and document analysis",
               "rhetor"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "table";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();

  TablesArgs tables_args;
  auto* tables = app.add_subcommand("tables", "Capacity parameters for K = 1..max-k");
  tables->add_option("--max-k", tables_args.max_k, "Largest width")->check(CLI::Range(1u, kMaxExactWidth))
      ->capture_default_str();

  CapacityArgs capacity_args;
  auto* capacity_cmd = app.add_subcommand("capacity", "Capacity report for one width");
  capacity_cmd->add_option("--k", capacity_args.k, "Rhetorical width K")->required();
  capacity_cmd->add_option("--ratio-to", capacity_args.ratio_to, "Report K_NRC(K) / K_NRC(this)");
  capacity_cmd->add_option("--used", capacity_args.used, "Modes used, for coverage");
  capacity_cmd->add_option("--rate", capacity_args.rate, "Introduction rate L_n, for growth");
  capacity_cmd->add_option("--c0", capacity_args.c0, "Learner capacity C_0")->capture_default_str();

  EntropyArgs entropy_args;
  auto* entropy_cmd = app.add_subcommand("entropy", "Subset-size and layered entropy");
  entropy_cmd->add_option("--k", entropy_args.k, "Width")->check(CLI::Range(1u, kMaxEntropyWidth));
  entropy_cmd->add_option("--layers", entropy_args.layers, "Branching per layer, e.g. 4,4")
      ->delimiter(',')
      ->check(CLI::Range(1u, kMaxEntropyWidth));
  entropy_cmd->add_option("--flat", entropy_args.flat, "Flat width to compare against")
      ->check(CLI::Range(1u, kMaxEntropyWidth));
  entropy_cmd->add_option("--probs", entropy_args.probabilities, "Explicit distribution, e.g. 0.5,0.5")
      ->delimiter(',');

  DeriveArgs derive_args;
  auto* derive_cmd = app.add_subcommand("derive", "Apply duality operators or generate their closure");
  derive_cmd->add_option("--ops", derive_args.ops, "Operators: split,unite,fb,expand,reduce,ortho")
      ->delimiter(',')
      ->check(operator_check);
  derive_cmd->add_option("--depth", derive_args.depth, "Closure depth")->check(CLI::Range(1, 16))
      ->capture_default_str();
  derive_cmd->add_option("--registry", derive_args.registry, "Registry JSON")->check(CLI::ExistingFile);
  derive_cmd->add_option("--rules", derive_args.rules, "Duality rule JSON")->check(CLI::ExistingFile);
  derive_cmd->add_flag("--atoms-only-base", derive_args.atoms_only_base, "Start from the base atoms only");
  derive_cmd->add_option("--apply", derive_args.apply, "Apply one operator")->check(operator_check);
  derive_cmd->add_option("--input", derive_args.inputs, "Operator input(s)")->delimiter(',');

  MapArgs map_args;
  auto* map_cmd = app.add_subcommand("map", "Three-layer mapping graph");
  map_cmd->add_option("--profile", map_args.profile, "default or academic-writing")->capture_default_str();
  map_cmd->add_option("--file", map_args.file, "Mapping document JSON")->check(CLI::ExistingFile);
  map_cmd->add_option("--registry", map_args.registry, "Registry JSON")->check(CLI::ExistingFile);
  map_cmd->add_option("--realizers", map_args.realizers_of, "Lower-layer neighbours of LAYER:ID");
  map_cmd->add_option("--compose-re", map_args.compose, "Modes reachable from an E node, or 'all'");
  map_cmd->add_flag("--branching", map_args.branching, "Out-degree statistics");
  map_cmd->add_option("--compose-academic", map_args.academic, "Academic function name, or 'all'");
  map_cmd->add_flag("--export", map_args.export_document, "Print the graph as a mapping document");

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Coverage, layer trace and introduction rate of annotated documents");
  analyze_cmd->add_option("files", analyze_args.files, "Annotation file(s)")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--K", analyze_args.width, "Available width (overrides declared_K)");
  analyze_cmd->add_option("--map", analyze_args.map, "Stage map JSON")->check(CLI::ExistingFile);
  analyze_cmd->add_option("--profile", analyze_args.profile, "Mapping profile for --map")->capture_default_str();
  analyze_cmd->add_option("--graph", analyze_args.graph_file, "Mapping document for --map")
      ->check(CLI::ExistingFile);
  analyze_cmd->add_option("--registry", analyze_args.registry, "Registry JSON")->check(CLI::ExistingFile);
  analyze_cmd->add_flag("--rri", analyze_args.rri, "Treat the files as a staged corpus");
  analyze_cmd->add_option("--at", analyze_args.at, "Stage index per file (default 0,1,2,...)")->delimiter(',');

  ConeArgs cone_args;
  auto* cone_cmd = app.add_subcommand("cone", "Capacity and load per educational stage");
  cone_cmd->add_option("--schedule", cone_args.schedule, "Schedule JSON")->check(CLI::ExistingFile);
  cone_cmd->add_option("--c0", cone_args.c0, "Learner capacity C_0")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "UsageError: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    Report report;
    if (tables->parsed()) {
      report = cmd_tables(tables_args);
    } else if (capacity_cmd->parsed()) {
      report = cmd_capacity(capacity_args);
    } else if (entropy_cmd->parsed()) {
      report = cmd_entropy(entropy_args);
    } else if (derive_cmd->parsed()) {
      report = cmd_derive(derive_args);
    } else if (map_cmd->parsed()) {
      report = cmd_map(map_args);
    } else if (analyze_cmd->parsed()) {
      report = cmd_analyze(analyze_args);
    } else {
      report = cmd_cone(cone_args);
    }
    render(report, format, out);
    return kOk;
  } catch (const UsageError& e) {
    err << "UsageError: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << e.what();
    if (!e.suggestions().empty()) {
      err << " (did you mean:";
      for (const std::string& s : e.suggestions()) err << " " << s;
      err << "?)";
    }
    err << "\n";
    return kDomainError;
  }
}

}  // namespace rhetor::cli
