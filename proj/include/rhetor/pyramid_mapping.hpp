#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rhetor/entropy_analysis.hpp"
#include "rhetor/mode_registry.hpp"

namespace rhetor {

// R: rhetorical modes, C: cognitive functions, E: epistemic purposes.
enum class Layer { R, C, E };

std::string_view layer_name(Layer layer) noexcept;

// Key used for C/E node ids: canonical form restricted to [a-z0-9-].
std::string node_key(std::string_view name);

struct LayerNode {
  Layer layer = Layer::R;
  std::string id;
  std::string display_name;
  std::string description;

  friend bool operator==(const LayerNode&, const LayerNode&) = default;
};

using Edge = std::pair<std::string, std::string>;  // (upper id, lower id)

// Three-layer mapping graph. Edges run from an upper layer to the adjacent
// lower one: C->R and E->C. Equality ignores insertion order.
class PyramidGraph {
 public:
  explicit PyramidGraph(std::string profile = "custom") : profile_(std::move(profile)) {}

  void add_node(LayerNode node);
  // Throws BadEdge when either end is missing or the layers are not adjacent.
  void add_edge(Layer upper, std::string_view upper_id, std::string_view lower_id);
  void record_registered_mode(Mode mode);
  void set_auto_register(bool on) noexcept { auto_register_ = on; }

  const std::string& profile() const noexcept { return profile_; }
  bool auto_register() const noexcept { return auto_register_; }

  // Nodes of a layer in insertion order.
  std::vector<LayerNode> nodes(Layer layer) const;
  // Lookup by id or display name (both through node_key; R ids through canonicalize).
  const LayerNode* node(Layer layer, std::string_view name) const;

  const std::set<Edge>& edges_cr() const noexcept { return edges_cr_; }
  const std::set<Edge>& edges_ec() const noexcept { return edges_ec_; }

  // Modes the graph had to create because the registry lacked them.
  const std::vector<Mode>& registered_modes() const noexcept { return registered_; }

  friend bool operator==(const PyramidGraph& a, const PyramidGraph& b);

 private:
  std::map<std::string, LayerNode>& layer_map(Layer layer);
  const std::map<std::string, LayerNode>& layer_map(Layer layer) const;

  std::string profile_;
  bool auto_register_ = false;
  std::map<std::string, LayerNode> r_nodes_, c_nodes_, e_nodes_;
  std::vector<std::string> r_order_, c_order_, e_order_;
  std::set<Edge> edges_cr_, edges_ec_;
  std::vector<Mode> registered_;
};

// Built-in profiles: "default" (14 cognitive functions, 8 epistemic purposes)
// and "academic-writing" (7 academic-function groups). Throws UnknownProfile.
PyramidGraph load_pyramid(const Registry& registry, std::string_view profile);

// Mapping document:
// {"profile", "auto_register"?, "c_nodes":[{"id","display_name","description"?,"modes":[..]}],
//  "e_nodes":[{"id","display_name","description"?,"cognitive":[..]}]}
PyramidGraph load_pyramid_document(const Registry& registry, std::string_view json_text);
std::string serialize_pyramid(const PyramidGraph& graph);

// Lower-layer nodes directly connected to a C or E node. Sorted by id.
std::vector<LayerNode> realizers(const PyramidGraph& graph, Layer layer, std::string_view id);

// R-layer ids reachable from an E node through its C nodes. Sorted, unique.
std::vector<ModeId> compose_re(const PyramidGraph& graph, std::string_view epistemic_id);

struct NodeDegree {
  Layer layer = Layer::C;
  std::string id;
  std::size_t out_degree = 0;
};

struct LayerDegreeSummary {
  std::size_t nodes = 0;
  std::size_t max_out_degree = 0;
  double mean_out_degree = 0.0;
};

struct BranchingStats {
  std::vector<NodeDegree> nodes;  // C nodes then E nodes, insertion order
  LayerDegreeSummary c_layer;
  LayerDegreeSummary e_layer;

  // Per-layer worst-case branching ("C->R", "E->C"), ready for entropy_layered.
  std::vector<LayerBranching> layer_branchings() const;
};

BranchingStats branching_stats(const PyramidGraph& graph);

// A refreshed R-layer unit: one core mode strengthened by supplementary modes.
struct AcademicFunction {
  std::string name;
  std::string core;
  std::vector<std::string> core_alternatives;  // other acceptable cores
  std::vector<std::string> supplements;
};

// The definition complex and the claim complex.
std::vector<AcademicFunction> builtin_academic_functions();

// Compound mode "af-<name>" with constituents [core] + supplements and origin
// generated("academic-composition", ...). Throws UnknownMode or BadComposition.
Mode compose_academic(const Registry& registry, const AcademicFunction& function);

}  // namespace rhetor
