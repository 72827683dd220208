#include "rhetor/operator_calculus.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <nlohmann/json.hpp>

#include "rhetor/errors.hpp"

namespace rhetor {

using json = nlohmann::json;

namespace {

std::optional<ModeId> partner_in(const std::vector<std::pair<ModeId, ModeId>>& pairs, const ModeId& id) {
  for (const auto& [a, b] : pairs) {
    if (a == id) return b;
    if (b == id) return a;
  }
  return std::nullopt;
}

bool appears_in(const std::vector<std::pair<ModeId, ModeId>>& pairs, const ModeId& id) {
  return partner_in(pairs, id).has_value();
}

void check_pair(const std::vector<std::pair<ModeId, ModeId>>& pairs, const ModeId& a, const ModeId& b,
                std::string_view relation) {
  if (a.empty() || b.empty() || a == b) {
    throw Error(ErrorKind::ParseError, std::string(relation) + " pair needs two distinct ids");
  }
  for (const ModeId& id : {a, b}) {
    if (appears_in(pairs, id)) {
      throw Error(ErrorKind::ParseError,
                  "mode '" + id.str() + "' already takes part in a " + std::string(relation) + " pair");
    }
  }
}

std::string title_case(const ModeId& id) {
  std::string out;
  bool start = true;
  for (char c : id.str()) {
    if (c == '-') {
      out.push_back(' ');
      start = true;
      continue;
    }
    out.push_back(start && c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
    start = false;
  }
  return out;
}

Generated materialize(const Registry& registry, const ModeId& id, OperatorKind op, const ModeId& input) {
  if (const Mode* existing = registry.find(id)) return {*existing, true};
  Mode mode;
  mode.id = id;
  mode.display_name = title_case(id);
  mode.origin = Origin::generated(std::string(operator_name(op)), {input});
  mode.description = "Generated by " + std::string(operator_name(op)) + " from " + input.str() + ".";
  return {std::move(mode), false};
}

// Input of a unary operator: a registry mode, or an id only the rules know.
ModeId unary_input(const Registry& registry, const DualityRuleSet& rules, std::string_view name,
                   bool require_atomic) {
  if (const Mode* mode = registry.find(name)) {
    if (require_atomic && !mode->is_atomic()) {
      throw Error(ErrorKind::NotAtomic, "'" + mode->id.str() + "' is " +
                                            std::string(arity_name(mode->arity())) + ", expected atomic");
    }
    return mode->id;
  }
  const ModeId id(name);
  if (rules.mentions(id)) return id;
  return registry.resolve(name).id;  // throws UnknownMode
}

Generated apply_unary(const Registry& registry, const DualityRuleSet& rules, OperatorKind op,
                      const ModeId& input) {
  std::optional<ModeId> partner;
  switch (op) {
    case OperatorKind::forward_backward: partner = rules.reversal_partner(input); break;
    case OperatorKind::expand: partner = rules.expanded_form(input); break;
    case OperatorKind::reduce: partner = rules.reduced_form(input); break;
    case OperatorKind::orthogonal: partner = rules.orthogonal_partner(input); break;
    default: break;
  }
  if (!partner) {
    throw Error(ErrorKind::NoDual,
                "no " + std::string(operator_name(op)) + " partner registered for '" + input.str() + "'");
  }
  return materialize(registry, *partner, op, input);
}

Generated unite_resolved(const Registry& registry, const Mode& a, const Mode& b) {
  if (const Mode* existing = registry.find_composition({a.id, b.id})) return {*existing, true};
  const auto& [first, second] = a.id < b.id ? std::tie(a, b) : std::tie(b, a);
  Mode mode;
  mode.id = ModeId(first.id.str() + "-" + second.id.str());
  mode.display_name = title_case(first.id) + "-" + title_case(second.id);
  mode.constituents = {first.id, second.id};
  mode.origin = Origin::generated("unite", {first.id, second.id});
  mode.description = "Generated by unite from " + first.id.str() + " and " + second.id.str() + ".";
  return {std::move(mode), false};
}

using SortKey = std::tuple<std::size_t, std::string, int, std::vector<ModeId>>;

SortKey sort_key(const Derivation& d) {
  return {d.depth, d.results.front().mode.id.str(), static_cast<int>(d.op), d.inputs};
}

}  // namespace

std::string_view operator_name(OperatorKind op) noexcept {
  switch (op) {
    case OperatorKind::split: return "split";
    case OperatorKind::unite: return "unite";
    case OperatorKind::forward_backward: return "forward-backward";
    case OperatorKind::expand: return "expand";
    case OperatorKind::reduce: return "reduce";
    case OperatorKind::orthogonal: return "orthogonal";
  }
  return "split";
}

OperatorKind parse_operator(std::string_view name) {
  const std::string key = canonicalize(name);
  if (key == "fb") return OperatorKind::forward_backward;
  if (key == "ortho") return OperatorKind::orthogonal;
  for (OperatorKind op : kAllOperators) {
    if (operator_name(op) == key) return op;
  }
  throw Error(ErrorKind::ParseError, "unknown operator '" + std::string(name) + "'");
}

std::size_t operator_arity(OperatorKind op) noexcept { return op == OperatorKind::unite ? 2 : 1; }

DualityRuleSet DualityRuleSet::defaults() {
  DualityRuleSet rules;
  rules.add_reversal(ModeId("cause"), ModeId("effect"));
  rules.add_reversal(ModeId("problem"), ModeId("solution"));
  rules.add_reversal(ModeId("exemplification"), ModeId("generalization"));
  rules.add_reversal(ModeId("division"), ModeId("combination"));
  rules.add_scale(ModeId("exposition"), ModeId("summary"));
  rules.add_orthogonal(ModeId("narration"), ModeId("description"));
  return rules;
}

void DualityRuleSet::add_reversal(const ModeId& a, const ModeId& b) {
  check_pair(reversal_, a, b, "reversal");
  reversal_.emplace_back(a, b);
}

void DualityRuleSet::add_scale(const ModeId& expanded, const ModeId& reduced) {
  check_pair(scale_, expanded, reduced, "scale");
  scale_.emplace_back(expanded, reduced);
}

void DualityRuleSet::add_orthogonal(const ModeId& a, const ModeId& b) {
  check_pair(orthogonal_, a, b, "orthogonal");
  orthogonal_.emplace_back(a, b);
}

std::optional<ModeId> DualityRuleSet::reversal_partner(const ModeId& id) const {
  return partner_in(reversal_, id);
}

std::optional<ModeId> DualityRuleSet::reduced_form(const ModeId& expanded) const {
  for (const auto& [big, small] : scale_) {
    if (big == expanded) return small;
  }
  return std::nullopt;
}

std::optional<ModeId> DualityRuleSet::expanded_form(const ModeId& reduced) const {
  for (const auto& [big, small] : scale_) {
    if (small == reduced) return big;
  }
  return std::nullopt;
}

std::optional<ModeId> DualityRuleSet::orthogonal_partner(const ModeId& id) const {
  return partner_in(orthogonal_, id);
}

bool DualityRuleSet::mentions(const ModeId& id) const {
  return appears_in(reversal_, id) || appears_in(scale_, id) || appears_in(orthogonal_, id);
}

DualityRuleSet load_rules(std::string_view json_text) {
  try {
    const json document = json::parse(json_text);
    DualityRuleSet rules;
    const auto read_pairs = [&document](const char* key, auto add) {
      if (!document.contains(key)) return;
      for (const auto& pair : document.at(key)) {
        if (!pair.is_array() || pair.size() != 2) {
          throw Error(ErrorKind::ParseError, std::string("\"") + key + "\" entries must be two-element arrays");
        }
        add(ModeId(pair[0].get<std::string>()), ModeId(pair[1].get<std::string>()));
      }
    };
    read_pairs("reversal", [&rules](ModeId a, ModeId b) { rules.add_reversal(a, b); });
    read_pairs("scale", [&rules](ModeId a, ModeId b) { rules.add_scale(a, b); });
    read_pairs("orthogonal", [&rules](ModeId a, ModeId b) { rules.add_orthogonal(a, b); });
    return rules;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("rule document: ") + e.what());
  }
}

std::string serialize_rules(const DualityRuleSet& rules) {
  const auto pairs = [](const std::vector<std::pair<ModeId, ModeId>>& source) {
    json out = json::array();
    for (const auto& [a, b] : source) out.push_back({a.str(), b.str()});
    return out;
  };
  json document{{"reversal", pairs(rules.reversal_pairs())},
                {"scale", pairs(rules.scale_pairs())},
                {"orthogonal", pairs(rules.orthogonal_pairs())}};
  return document.dump(2) + "\n";
}

std::pair<Mode, Mode> split(const Registry& registry, std::string_view diatomic) {
  const Mode& mode = registry.resolve(diatomic);
  if (mode.arity() != Arity::diatomic) {
    throw Error(ErrorKind::NotDiatomic,
                "'" + mode.id.str() + "' is " + std::string(arity_name(mode.arity())) + ", expected diatomic");
  }
  return {registry.resolve(mode.constituents[0].str()), registry.resolve(mode.constituents[1].str())};
}

Generated unite(const Registry& registry, std::string_view a, std::string_view b) {
  const Mode& first = registry.resolve(a);
  const Mode& second = registry.resolve(b);
  if (first.id == second.id) {
    throw Error(ErrorKind::SelfUnite, "cannot unite '" + first.id.str() + "' with itself");
  }
  for (const Mode* mode : {&first, &second}) {
    if (!mode->is_atomic()) {
      throw Error(ErrorKind::NotAtomic, "'" + mode->id.str() + "' is " +
                                            std::string(arity_name(mode->arity())) + ", expected atomic");
    }
  }
  return unite_resolved(registry, first, second);
}

Generated forward_backward(const Registry& registry, const DualityRuleSet& rules, std::string_view mode) {
  return apply_unary(registry, rules, OperatorKind::forward_backward, unary_input(registry, rules, mode, true));
}

Generated expand(const Registry& registry, const DualityRuleSet& rules, std::string_view mode) {
  return apply_unary(registry, rules, OperatorKind::expand, unary_input(registry, rules, mode, false));
}

Generated reduce(const Registry& registry, const DualityRuleSet& rules, std::string_view mode) {
  return apply_unary(registry, rules, OperatorKind::reduce, unary_input(registry, rules, mode, false));
}

Generated orthogonal(const Registry& registry, const DualityRuleSet& rules, std::string_view mode) {
  return apply_unary(registry, rules, OperatorKind::orthogonal, unary_input(registry, rules, mode, false));
}

std::vector<Derivation> closure(const Registry& registry, const DualityRuleSet& rules,
                                const std::set<OperatorKind>& ops, std::size_t max_depth) {
  std::vector<Derivation> accepted;
  std::set<ModeId> claimed;
  Registry universe = registry;

  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    std::vector<Derivation> candidates;
    const std::vector<Mode> atoms = universe.atoms();

    for (OperatorKind op : ops) {
      if (op == OperatorKind::split) {
        for (const auto& [id, mode] : universe.modes()) {
          if (mode.arity() != Arity::diatomic) continue;
          auto [a, b] = split(universe, id.str());
          candidates.push_back({op, {id}, {{a, true}, {b, true}}, depth});
        }
      } else if (op == OperatorKind::unite) {
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            candidates.push_back({op, {atoms[i].id, atoms[j].id}, {unite_resolved(universe, atoms[i], atoms[j])},
                                  depth});
          }
        }
      } else {
        for (const auto& [id, mode] : universe.modes()) {
          if (op == OperatorKind::forward_backward && !mode.is_atomic()) continue;
          try {
            candidates.push_back({op, {id}, {apply_unary(universe, rules, op, id)}, depth});
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NoDual) throw;
          }
        }
      }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Derivation& x, const Derivation& y) { return sort_key(x) < sort_key(y); });

    std::vector<Mode> fresh;
    bool progressed = false;
    for (Derivation& candidate : candidates) {
      bool any_new = false;
      for (const Generated& result : candidate.results) {
        if (claimed.count(result.mode.id) == 0) any_new = true;
      }
      if (!any_new) continue;
      for (const Generated& result : candidate.results) {
        if (!claimed.insert(result.mode.id).second) continue;
        if (!result.rediscovery && !universe.contains(result.mode.id)) fresh.push_back(result.mode);
      }
      accepted.push_back(std::move(candidate));
      progressed = true;
    }
    if (!progressed) break;
    if (!fresh.empty()) universe = universe.extended(std::move(fresh));
  }

  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const Derivation& x, const Derivation& y) { return sort_key(x) < sort_key(y); });
  return accepted;
}

}  // namespace rhetor
