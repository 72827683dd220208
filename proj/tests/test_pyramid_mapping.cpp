#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "rhetor/errors.hpp"
#include "rhetor/pyramid_mapping.hpp"
#include "support.hpp"

using namespace rhetor;

namespace {

ErrorKind kind_of(const std::function<void()>& action) {
  try {
    action();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ParseError;
}

// C display name -> R ids, straight from the transcribed table.
std::map<std::string, std::set<std::string>> cognitive_oracle(const Registry& registry) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& row : support::read_csv("tests/fixtures/table4_edges.csv")) {
    out[node_key(row[1])].insert(registry.resolve(row[2]).id.str());
  }
  return out;
}

std::map<std::string, std::set<std::string>> epistemic_oracle() {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& row : support::read_csv("tests/fixtures/table5_edges.csv")) {
    out[node_key(row[1])].insert(node_key(row[2]));
  }
  return out;
}

}  // namespace

TEST_CASE("node keys") {
  CHECK(node_key("Test / Validate") == "test-validate");
  CHECK(node_key("Reflect / Meta-cognitive Assessment") == "reflect-meta-cognitive-assessment");
  CHECK(node_key("Evaluation / Decision-Making") == "evaluation-decision-making");
}

TEST_CASE("default graph matches the transcribed tables edge for edge") {
  const Registry registry = Registry::builtin();
  const PyramidGraph graph = load_pyramid(registry, "default");
  CHECK(graph.nodes(Layer::C).size() == 14);
  CHECK(graph.nodes(Layer::E).size() == 8);

  std::set<Edge> cr;
  const auto t4 = support::read_csv("tests/fixtures/table4_edges.csv");
  CHECK(t4.size() == 47);
  for (const auto& row : t4) {
    const LayerNode* c = graph.node(Layer::C, row[1]);
    REQUIRE_MESSAGE(c != nullptr, row[1]);
    cr.insert({c->id, registry.resolve(row[2]).id.str()});
  }
  // "Illustration" and "Evidence" name the same mode within one row.
  CHECK(cr.size() == 46);
  CHECK(graph.edges_cr() == cr);

  std::set<Edge> ec;
  const auto t5 = support::read_csv("tests/fixtures/table5_edges.csv");
  CHECK(t5.size() == 34);
  for (const auto& row : t5) {
    const LayerNode* e = graph.node(Layer::E, row[1]);
    const LayerNode* c = graph.node(Layer::C, row[2]);
    REQUIRE(e != nullptr);
    REQUIRE(c != nullptr);
    ec.insert({e->id, c->id});
  }
  CHECK(ec.size() == 34);
  CHECK(graph.edges_ec() == ec);
}

TEST_CASE("composed reachability equals the brute-force union") {
  const Registry registry = Registry::builtin();
  const PyramidGraph graph = load_pyramid(registry, "default");
  const auto cognitive = cognitive_oracle(registry);
  const auto epistemic = epistemic_oracle();
  REQUIRE(epistemic.size() == 8);
  for (const auto& [e, cs] : epistemic) {
    std::set<std::string> expected;
    for (const std::string& c : cs) {
      const auto& modes = cognitive.at(c);
      expected.insert(modes.begin(), modes.end());
    }
    std::set<std::string> got;
    for (const ModeId& id : compose_re(graph, e)) got.insert(id.str());
    CAPTURE(e);
    CHECK(got == expected);
  }
  std::vector<std::string> knowledge;
  for (const ModeId& id : compose_re(graph, "Knowledge Formation")) knowledge.push_back(id.str());
  CHECK(knowledge == std::vector<std::string>{"analogy", "classification", "contrast", "definition", "description",
                                              "division", "evidence", "exemplification", "exposition",
                                              "narration"});
}

TEST_CASE("realizer queries") {
  const Registry registry = Registry::builtin();
  const PyramidGraph graph = load_pyramid(registry, "default");
  std::vector<std::string> observe;
  for (const LayerNode& n : realizers(graph, Layer::C, "observe")) observe.push_back(n.id);
  CHECK(observe == std::vector<std::string>{"description", "evidence", "exemplification", "narration"});
  CHECK(realizers(graph, Layer::E, "teaching-learning").size() == 6);
  CHECK(kind_of([&] { realizers(graph, Layer::C, "daydream"); }) == ErrorKind::UnknownNode);
  CHECK(kind_of([&] { realizers(graph, Layer::R, "narration"); }) == ErrorKind::UnknownNode);
  CHECK(kind_of([&] { compose_re(graph, "observe"); }) == ErrorKind::UnknownNode);
}

TEST_CASE("graph construction errors") {
  PyramidGraph graph;
  graph.add_node({Layer::C, "observe", "Observe", ""});
  CHECK(kind_of([&] { graph.add_node({Layer::C, "observe", "Again", ""}); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { graph.add_edge(Layer::C, "observe", "narration"); }) == ErrorKind::BadEdge);
  CHECK(kind_of([&] { graph.add_edge(Layer::R, "observe", "narration"); }) == ErrorKind::BadEdge);
  CHECK(kind_of([&] { graph.add_edge(Layer::E, "nothing", "observe"); }) == ErrorKind::BadEdge);
  CHECK(kind_of([] { load_pyramid(Registry::builtin(), "rococo"); }) == ErrorKind::UnknownProfile);
  CHECK(kind_of([] {
          load_pyramid_document(Registry::builtin(), R"({"c_nodes":[{"id":"x","modes":["telepathy"]}]})");
        }) == ErrorKind::BadEdge);
  CHECK(kind_of([] { load_pyramid_document(Registry::builtin(), "{"); }) == ErrorKind::ParseError);
}

TEST_CASE("academic-writing profile") {
  const Registry registry = Registry::builtin();
  const PyramidGraph graph = load_pyramid(registry, "academic-writing");
  CHECK(graph.nodes(Layer::C).size() == 7);
  CHECK(graph.nodes(Layer::E).size() == 7);
  CHECK(graph.auto_register());
  CHECK_FALSE(graph.registered_modes().empty());
  for (const Mode& mode : graph.registered_modes()) {
    CHECK(mode.origin.kind == OriginKind::generated);
    CHECK_FALSE(registry.contains(mode.id));
  }
  for (const LayerNode& e : graph.nodes(Layer::E)) CHECK(realizers(graph, Layer::E, e.id).size() == 1);
  const auto relational = realizers(graph, Layer::C, "relational-reasoning");
  CHECK(relational.size() == 7);
}

TEST_CASE("mapping documents round-trip") {
  const Registry registry = Registry::builtin();
  for (const char* profile : {"default", "academic-writing"}) {
    CAPTURE(profile);
    const PyramidGraph graph = load_pyramid(registry, profile);
    const std::string text = serialize_pyramid(graph);
    const PyramidGraph reloaded = load_pyramid_document(registry, text);
    CHECK(reloaded == graph);
    CHECK(serialize_pyramid(reloaded) == text);
  }
}

TEST_CASE("branching statistics") {
  const PyramidGraph graph = load_pyramid(Registry::builtin(), "default");
  const BranchingStats stats = branching_stats(graph);
  CHECK(stats.c_layer.nodes == 14);
  CHECK(stats.c_layer.max_out_degree == 5);
  CHECK(stats.c_layer.mean_out_degree == doctest::Approx(46.0 / 14.0));
  CHECK(stats.e_layer.max_out_degree == 6);
  CHECK(stats.e_layer.mean_out_degree == doctest::Approx(34.0 / 8.0));
  const auto branchings = stats.layer_branchings();
  REQUIRE(branchings.size() == 2);
  const LayeredEntropyReport layered = entropy_layered(branchings, 20);
  CHECK(layered.max_stage_bits < layered.flat_bits);
}

TEST_CASE("academic functions") {
  const Registry registry = Registry::builtin();
  const auto functions = builtin_academic_functions();
  REQUIRE(functions.size() == 2);
  const Mode definition = compose_academic(registry, functions[0]);
  CHECK(definition.id.str() == "af-definition");
  CHECK(definition.constituents.front().str() == "definition");
  CHECK(definition.constituents.size() == 4);
  CHECK(definition.arity() == Arity::compound);
  CHECK(definition.origin.op == "academic-composition");

  const Mode claim = compose_academic(registry, functions[1]);
  CHECK(claim.constituents.front().str() == "cause-effect");
  CHECK(claim.constituents.size() == 5);

  CHECK(kind_of([&] { compose_academic(registry, {"x", "definition", {}, {}}); }) == ErrorKind::BadComposition);
  CHECK(kind_of([&] { compose_academic(registry, {"x", "definition", {}, {"definition"}}); }) ==
        ErrorKind::BadComposition);
  CHECK(kind_of([&] { compose_academic(registry, {"x", "definition", {}, {"analogy", "Analogy"}}); }) ==
        ErrorKind::BadComposition);
  CHECK(kind_of([&] { compose_academic(registry, {"x", "definition", {}, {"telepathy"}}); }) ==
        ErrorKind::UnknownMode);

  // Compounds built from atoms can join the registry.
  const Mode atoms_only = compose_academic(registry, {"recap", "exposition", {}, {"narration", "evidence"}});
  CHECK(registry.extended({atoms_only}).contains(ModeId("af-recap")));
}
