#include "rhetor/pyramid_mapping.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "rhetor/errors.hpp"

namespace rhetor {

using json = nlohmann::json;

namespace {

struct NodeSpec {
  const char* id;
  const char* display_name;
  const char* description;
  std::vector<const char*> targets;
};

// Cognitive functions and the rhetorical modes typically realizing them.
const std::vector<NodeSpec>& default_c_nodes() {
  static const std::vector<NodeSpec> nodes = {
      {"observe", "Observe", "Register phenomena and qualitative data.",
       {"Description", "Narration", "Exemplification", "Evidence"}},
      {"identify", "Identify", "Tell entities or patterns apart.",
       {"Definition", "Contrast", "Classification", "Evidence"}},
      {"compare", "Compare", "Relate attributes or outcomes.", {"Comparison", "Analogy", "Evaluation"}},
      {"classify", "Classify", "Sort into structured groups.", {"Classification", "Division", "Definition"}},
      {"abstract", "Abstract", "Pull out general properties.", {"Exemplification", "Exposition", "Analogy"}},
      {"hypothesize", "Hypothesize", "Propose candidate explanations.", {"Problem", "Cause", "Argumentation"}},
      {"model", "Model", "Represent systems or relations symbolically.",
       {"Process Analysis", "Analogy", "Exposition"}},
      {"infer", "Infer", "Derive implications or rules.", {"Cause", "Effect", "Argumentation"}},
      {"test-validate", "Test / Validate", "Check hypotheses or models against evidence.",
       {"Evidence", "Illustration", "Evaluation"}},
      {"explain", "Explain", "Give causal or functional accounts.",
       {"Cause and Effect", "Exposition", "Process Analysis"}},
      {"evaluate", "Evaluate", "Judge the validity or relevance of claims.",
       {"Evaluation", "Comparison", "Argumentation", "Persuasion"}},
      {"predict", "Predict", "Anticipate outcomes or states.", {"Analogy", "Cause", "Process Analysis"}},
      {"integrate-synthesize", "Integrate / Synthesize", "Join separate lines of reasoning into a whole.",
       {"Exposition", "Analogy", "Synthesis"}},
      {"reflect", "Reflect / Meta-cognitive Assessment", "Assess the limits of one's own reasoning.",
       {"Evaluation", "Definition", "Problem-solution", "Exposition", "Persuasion"}},
  };
  return nodes;
}

// Epistemic purposes and the cognitive functions serving them.
const std::vector<NodeSpec>& default_e_nodes() {
  static const std::vector<NodeSpec> nodes = {
      {"knowledge-formation", "Knowledge Formation", "Conceptual development.",
       {"observe", "identify", "classify", "abstract"}},
      {"scientific-discovery", "Scientific Discovery", "Forming and testing hypotheses.",
       {"hypothesize", "model", "test-validate", "infer"}},
      {"communication", "Communication", "Spreading knowledge through discourse.",
       {"compare", "explain", "integrate-synthesize", "evaluate"}},
      {"teaching-learning", "Teaching / Learning", "Passing knowledge on to learners.",
       {"observe", "identify", "model", "explain", "evaluate", "reflect"}},
      {"problem-solving", "Problem Solving", "Applying knowledge to practical problems.",
       {"classify", "hypothesize", "infer", "test-validate", "evaluate"}},
      {"innovation-design", "Innovation / Design", "Creating new systems or methods.",
       {"model", "abstract", "integrate-synthesize", "predict"}},
      {"evaluation-decision-making", "Evaluation / Decision-Making", "Evidence-based assessment.",
       {"evaluate", "reflect", "infer"}},
      {"policy-action-implementation", "Policy / Action Implementation", "Applying knowledge in practice.",
       {"predict", "explain", "integrate-synthesize", "evaluate"}},
  };
  return nodes;
}

const std::vector<NodeSpec>& academic_c_nodes() {
  static const std::vector<NodeSpec> nodes = {
      {"information-presentation", "Information presentation",
       "Background, features, structure and hierarchy of the subject.",
       {"narration", "description", "definition", "classification", "decomposition", "grading",
        "summarization", "delineation"}},
      {"relational-reasoning", "Relational reasoning", "Relationships among entities.",
       {"comparison", "contrast", "analogy", "relational analysis", "causal analysis", "induction",
        "synthesis"}},
      {"process-construction", "Process construction", "Sequences and operational steps.",
       {"process analysis", "procedural description"}},
      {"argumentation-support", "Argumentation support", "Claims and reasoning chains.",
       {"exemplification", "evidence", "argumentation", "persuasion", "elaboration", "claim-making"}},
      {"understanding-construction", "Understanding construction", "Conceptual clarity.",
       {"clarification", "explanation"}},
      {"interaction-construction", "Interaction construction", "Reader engagement.",
       {"questioning", "answering"}},
      {"evaluation-reflection", "Evaluation and reflection", "Value and validity of results.",
       {"evaluation", "verification", "validation"}},
  };
  return nodes;
}

const std::vector<NodeSpec>& academic_e_nodes() {
  static const std::vector<NodeSpec> nodes = {
      {"shared-conceptual-ground", "Establishing shared conceptual ground", "Perceptual organization.",
       {"information-presentation"}},
      {"relational-understanding", "Constructing relational understanding", "Analytical linking.",
       {"relational-reasoning"}},
      {"operational-logic", "Revealing operational logic", "Sequential reasoning.", {"process-construction"}},
      {"validating-propositions", "Validating propositions", "Inferential justification.",
       {"argumentation-support"}},
      {"conceptual-coherence", "Achieving conceptual coherence", "Integrative comprehension.",
       {"understanding-construction"}},
      {"co-constructed-understanding", "Co-constructing understanding", "Dialogic coordination.",
       {"interaction-construction"}},
      {"reliability-significance", "Determining reliability and significance", "Critical judgment.",
       {"evaluation-reflection"}},
  };
  return nodes;
}

// Resolves an R-layer name, creating the mode when the graph may do so.
const LayerNode& ensure_r_node(PyramidGraph& graph, const Registry& registry, std::string_view name) {
  if (const LayerNode* existing = graph.node(Layer::R, name)) return *existing;
  Mode mode;
  if (const Mode* known = registry.find(name)) {
    mode = *known;
  } else {
    for (const Mode& created : graph.registered_modes()) {
      if (created.id == ModeId(name)) mode = created;
    }
    if (mode.id.empty()) {
      if (!graph.auto_register()) {
        throw Error(ErrorKind::BadEdge, "mapping references unknown rhetorical mode '" + std::string(name) + "'");
      }
      mode.id = ModeId(name);
      mode.display_name = mode.id.str();
      std::replace(mode.display_name.begin(), mode.display_name.end(), '-', ' ');
      mode.origin = Origin::generated("academic-profile", {});
      mode.description = "Academic function introduced by the mapping profile.";
      graph.record_registered_mode(mode);
    }
  }
  if (const LayerNode* existing = graph.node(Layer::R, mode.id.str())) return *existing;
  graph.add_node({Layer::R, mode.id.str(), mode.display_name, mode.description});
  return *graph.node(Layer::R, mode.id.str());
}

PyramidGraph build(const Registry& registry, std::string profile, bool auto_register,
                   const std::vector<NodeSpec>& c_nodes, const std::vector<NodeSpec>& e_nodes) {
  PyramidGraph graph(std::move(profile));
  graph.set_auto_register(auto_register);
  for (const NodeSpec& spec : c_nodes) {
    graph.add_node({Layer::C, spec.id, spec.display_name, spec.description});
    for (const char* target : spec.targets) {
      const LayerNode& r = ensure_r_node(graph, registry, target);
      graph.add_edge(Layer::C, spec.id, r.id);
    }
  }
  for (const NodeSpec& spec : e_nodes) {
    graph.add_node({Layer::E, spec.id, spec.display_name, spec.description});
    for (const char* target : spec.targets) graph.add_edge(Layer::E, spec.id, target);
  }
  return graph;
}

std::vector<std::string> sorted_targets(const std::set<Edge>& edges, const std::string& upper) {
  std::vector<std::string> out;
  for (auto it = edges.lower_bound({upper, ""}); it != edges.end() && it->first == upper; ++it) {
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

std::string_view layer_name(Layer layer) noexcept {
  switch (layer) {
    case Layer::R: return "R";
    case Layer::C: return "C";
    case Layer::E: return "E";
  }
  return "R";
}

std::string node_key(std::string_view name) {
  std::string out;
  for (char c : canonicalize(name)) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (!keep) continue;
    if (c == '-' && (out.empty() || out.back() == '-')) continue;
    out.push_back(c);
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::map<std::string, LayerNode>& PyramidGraph::layer_map(Layer layer) {
  return layer == Layer::R ? r_nodes_ : layer == Layer::C ? c_nodes_ : e_nodes_;
}

const std::map<std::string, LayerNode>& PyramidGraph::layer_map(Layer layer) const {
  return layer == Layer::R ? r_nodes_ : layer == Layer::C ? c_nodes_ : e_nodes_;
}

void PyramidGraph::add_node(LayerNode node) {
  node.id = node.layer == Layer::R ? canonicalize(node.id) : node_key(node.id);
  if (node.id.empty()) throw Error(ErrorKind::ParseError, "layer node with empty id");
  auto& nodes = layer_map(node.layer);
  const std::string id = node.id;
  const Layer layer = node.layer;
  if (!nodes.emplace(id, std::move(node)).second) {
    throw Error(ErrorKind::ParseError,
                "duplicate " + std::string(layer_name(layer)) + "-layer node '" + id + "'");
  }
  (layer == Layer::R ? r_order_ : layer == Layer::C ? c_order_ : e_order_).push_back(id);
}

void PyramidGraph::add_edge(Layer upper, std::string_view upper_id, std::string_view lower_id) {
  if (upper == Layer::R) throw Error(ErrorKind::BadEdge, "R is the bottom layer; it has no outgoing edges");
  const Layer lower = upper == Layer::E ? Layer::C : Layer::R;
  const LayerNode* from = node(upper, upper_id);
  const LayerNode* to = node(lower, lower_id);
  if (from == nullptr || to == nullptr) {
    throw Error(ErrorKind::BadEdge, "edge " + std::string(layer_name(upper)) + ":" + std::string(upper_id) +
                                        " -> " + std::string(layer_name(lower)) + ":" + std::string(lower_id) +
                                        " references a missing node");
  }
  (upper == Layer::C ? edges_cr_ : edges_ec_).emplace(from->id, to->id);
}

void PyramidGraph::record_registered_mode(Mode mode) { registered_.push_back(std::move(mode)); }

std::vector<LayerNode> PyramidGraph::nodes(Layer layer) const {
  const auto& order = layer == Layer::R ? r_order_ : layer == Layer::C ? c_order_ : e_order_;
  const auto& map = layer_map(layer);
  std::vector<LayerNode> out;
  out.reserve(order.size());
  for (const std::string& id : order) out.push_back(map.at(id));
  return out;
}

const LayerNode* PyramidGraph::node(Layer layer, std::string_view name) const {
  const auto& map = layer_map(layer);
  const std::string key = layer == Layer::R ? canonicalize(name) : node_key(name);
  if (auto it = map.find(key); it != map.end()) return &it->second;
  for (const auto& [id, candidate] : map) {
    if (node_key(candidate.display_name) == node_key(name)) return &candidate;
  }
  return nullptr;
}

bool operator==(const PyramidGraph& a, const PyramidGraph& b) {
  return a.profile_ == b.profile_ && a.auto_register_ == b.auto_register_ && a.r_nodes_ == b.r_nodes_ &&
         a.c_nodes_ == b.c_nodes_ && a.e_nodes_ == b.e_nodes_ && a.edges_cr_ == b.edges_cr_ &&
         a.edges_ec_ == b.edges_ec_;
}

PyramidGraph load_pyramid(const Registry& registry, std::string_view profile) {
  const std::string key = node_key(profile);
  if (key == "default") return build(registry, "default", false, default_c_nodes(), default_e_nodes());
  if (key == "academic-writing") {
    return build(registry, "academic-writing", true, academic_c_nodes(), academic_e_nodes());
  }
  throw Error(ErrorKind::UnknownProfile,
              "unknown mapping profile '" + std::string(profile) + "' (known: default, academic-writing)");
}

PyramidGraph load_pyramid_document(const Registry& registry, std::string_view json_text) {
  json document;
  try {
    document = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed mapping document: ") + e.what());
  }
  try {
    PyramidGraph graph(document.value("profile", "custom"));
    graph.set_auto_register(document.value("auto_register", false));
    for (const auto& entry : document.value("c_nodes", json::array())) {
      const std::string id = entry.at("id").get<std::string>();
      graph.add_node({Layer::C, id, entry.value("display_name", id), entry.value("description", "")});
      for (const auto& name : entry.value("modes", json::array())) {
        const LayerNode& r = ensure_r_node(graph, registry, name.get<std::string>());
        graph.add_edge(Layer::C, id, r.id);
      }
    }
    for (const auto& entry : document.value("e_nodes", json::array())) {
      const std::string id = entry.at("id").get<std::string>();
      graph.add_node({Layer::E, id, entry.value("display_name", id), entry.value("description", "")});
      for (const auto& name : entry.value("cognitive", json::array())) {
        graph.add_edge(Layer::E, id, name.get<std::string>());
      }
    }
    return graph;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("mapping document: ") + e.what());
  }
}

std::string serialize_pyramid(const PyramidGraph& graph) {
  json c_nodes = json::array();
  for (const LayerNode& node : graph.nodes(Layer::C)) {
    c_nodes.push_back({{"id", node.id},
                       {"display_name", node.display_name},
                       {"description", node.description},
                       {"modes", sorted_targets(graph.edges_cr(), node.id)}});
  }
  json e_nodes = json::array();
  for (const LayerNode& node : graph.nodes(Layer::E)) {
    e_nodes.push_back({{"id", node.id},
                       {"display_name", node.display_name},
                       {"description", node.description},
                       {"cognitive", sorted_targets(graph.edges_ec(), node.id)}});
  }
  json document{{"profile", graph.profile()},
                {"auto_register", graph.auto_register()},
                {"c_nodes", c_nodes},
                {"e_nodes", e_nodes}};
  return document.dump(2) + "\n";
}

std::vector<LayerNode> realizers(const PyramidGraph& graph, Layer layer, std::string_view id) {
  if (layer == Layer::R) {
    throw Error(ErrorKind::UnknownNode, "R-layer nodes have no realizers; ask for a C or E node");
  }
  const LayerNode* upper = graph.node(layer, id);
  if (upper == nullptr) {
    throw Error(ErrorKind::UnknownNode, "no " + std::string(layer_name(layer)) + "-layer node '" +
                                            std::string(id) + "'");
  }
  const Layer lower = layer == Layer::E ? Layer::C : Layer::R;
  std::vector<LayerNode> out;
  for (const std::string& target : sorted_targets(layer == Layer::C ? graph.edges_cr() : graph.edges_ec(),
                                                  upper->id)) {
    out.push_back(*graph.node(lower, target));
  }
  return out;
}

std::vector<ModeId> compose_re(const PyramidGraph& graph, std::string_view epistemic_id) {
  std::set<ModeId> reached;
  for (const LayerNode& cognitive : realizers(graph, Layer::E, epistemic_id)) {
    for (const LayerNode& mode : realizers(graph, Layer::C, cognitive.id)) reached.insert(ModeId(mode.id));
  }
  return {reached.begin(), reached.end()};
}

std::vector<LayerBranching> BranchingStats::layer_branchings() const {
  std::vector<LayerBranching> out;
  if (c_layer.nodes != 0) out.push_back({"C->R", static_cast<unsigned>(c_layer.max_out_degree)});
  if (e_layer.nodes != 0) out.push_back({"E->C", static_cast<unsigned>(e_layer.max_out_degree)});
  return out;
}

BranchingStats branching_stats(const PyramidGraph& graph) {
  BranchingStats stats;
  const auto summarize = [&stats, &graph](Layer layer, const std::set<Edge>& edges, LayerDegreeSummary& summary) {
    std::size_t total = 0;
    for (const LayerNode& node : graph.nodes(layer)) {
      const std::size_t degree = sorted_targets(edges, node.id).size();
      stats.nodes.push_back({layer, node.id, degree});
      summary.max_out_degree = std::max(summary.max_out_degree, degree);
      total += degree;
      ++summary.nodes;
    }
    summary.mean_out_degree = summary.nodes == 0 ? 0.0 : static_cast<double>(total) / summary.nodes;
  };
  summarize(Layer::C, graph.edges_cr(), stats.c_layer);
  summarize(Layer::E, graph.edges_ec(), stats.e_layer);
  return stats;
}

std::vector<AcademicFunction> builtin_academic_functions() {
  return {
      {"definition", "definition", {}, {"comparison", "exemplification", "classification"}},
      {"claim", "cause-effect", {"description"}, {"argument", "evaluation", "comparison", "evidence"}},
  };
}

Mode compose_academic(const Registry& registry, const AcademicFunction& function) {
  if (node_key(function.name).empty()) throw Error(ErrorKind::BadComposition, "academic function needs a name");
  if (function.supplements.empty()) {
    throw Error(ErrorKind::BadComposition, "academic function '" + function.name + "' has no supplementary modes");
  }
  const ModeId core = registry.resolve(function.core).id;
  for (const std::string& alternative : function.core_alternatives) registry.resolve(alternative);
  std::vector<ModeId> constituents{core};
  for (const std::string& name : function.supplements) {
    const ModeId id = registry.resolve(name).id;
    if (id == core) {
      throw Error(ErrorKind::BadComposition, "core mode '" + core.str() + "' is also listed as a supplement");
    }
    if (std::find(constituents.begin(), constituents.end(), id) != constituents.end()) {
      throw Error(ErrorKind::BadComposition, "supplement '" + id.str() + "' is listed twice");
    }
    constituents.push_back(id);
  }
  Mode mode;
  mode.id = ModeId("af-" + node_key(function.name));
  mode.display_name = function.name + " (academic function)";
  mode.constituents = constituents;
  mode.origin = Origin::generated("academic-composition", constituents);
  mode.description = "Core " + core.str() + " strengthened by " + std::to_string(function.supplements.size()) +
                     " supplementary modes.";
  return mode;
}

}  // namespace rhetor
