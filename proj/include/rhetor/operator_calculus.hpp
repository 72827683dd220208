#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rhetor/mode_registry.hpp"

namespace rhetor {

enum class OperatorKind { split, unite, forward_backward, expand, reduce, orthogonal };

inline constexpr OperatorKind kAllOperators[] = {
    OperatorKind::split,  OperatorKind::unite,  OperatorKind::forward_backward,
    OperatorKind::expand, OperatorKind::reduce, OperatorKind::orthogonal,
};

// "split", "unite", "forward-backward", "expand", "reduce", "orthogonal".
std::string_view operator_name(OperatorKind op) noexcept;
// Accepts the names above plus the short forms "fb" and "ortho".
OperatorKind parse_operator(std::string_view name);
std::size_t operator_arity(OperatorKind op) noexcept;

// Registered dual pairs driving the unary operators. Each mode takes part in
// at most one pair per relation.
class DualityRuleSet {
 public:
  // cause/effect, problem/solution, exemplification/generalization,
  // division/combination reversals; exposition->summary scale;
  // narration/description orthogonal.
  static DualityRuleSet defaults();

  void add_reversal(const ModeId& a, const ModeId& b);
  void add_scale(const ModeId& expanded, const ModeId& reduced);
  void add_orthogonal(const ModeId& a, const ModeId& b);

  std::optional<ModeId> reversal_partner(const ModeId& id) const;
  std::optional<ModeId> reduced_form(const ModeId& expanded) const;
  std::optional<ModeId> expanded_form(const ModeId& reduced) const;
  std::optional<ModeId> orthogonal_partner(const ModeId& id) const;

  // True when some pair of any relation names `id`.
  bool mentions(const ModeId& id) const;

  // Pairs in insertion order.
  const std::vector<std::pair<ModeId, ModeId>>& reversal_pairs() const noexcept { return reversal_; }
  const std::vector<std::pair<ModeId, ModeId>>& scale_pairs() const noexcept { return scale_; }
  const std::vector<std::pair<ModeId, ModeId>>& orthogonal_pairs() const noexcept { return orthogonal_; }

 private:
  std::vector<std::pair<ModeId, ModeId>> reversal_;
  std::vector<std::pair<ModeId, ModeId>> scale_;  // (expanded, reduced)
  std::vector<std::pair<ModeId, ModeId>> orthogonal_;
};

DualityRuleSet load_rules(std::string_view json_text);
std::string serialize_rules(const DualityRuleSet& rules);

// Result of one operator application. `rediscovery` is set when the mode
// already existed in the registry the operator ran against.
struct Generated {
  Mode mode;
  bool rediscovery = false;
};

std::pair<Mode, Mode> split(const Registry& registry, std::string_view diatomic);
Generated unite(const Registry& registry, std::string_view a, std::string_view b);
Generated forward_backward(const Registry& registry, const DualityRuleSet& rules, std::string_view mode);
Generated expand(const Registry& registry, const DualityRuleSet& rules, std::string_view mode);
Generated reduce(const Registry& registry, const DualityRuleSet& rules, std::string_view mode);
Generated orthogonal(const Registry& registry, const DualityRuleSet& rules, std::string_view mode);

struct Derivation {
  OperatorKind op;
  std::vector<ModeId> inputs;
  std::vector<Generated> results;  // two for split, one otherwise
  std::size_t depth = 1;
};

// Breadth-first application of `ops` to every applicable mode, up to
// `max_depth` rounds. Each result id keeps its first (shallowest) derivation;
// output is ordered by depth, then result id.
std::vector<Derivation> closure(const Registry& registry, const DualityRuleSet& rules,
                                const std::set<OperatorKind>& ops, std::size_t max_depth);

}  // namespace rhetor
