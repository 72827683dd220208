#include "rhetor/mode_registry.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rhetor/errors.hpp"

namespace rhetor {

using json = nlohmann::json;

namespace {

bool is_separator_at(std::string_view s, std::size_t i, std::size_t& width) {
  const unsigned char c = static_cast<unsigned char>(s[i]);
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '-' || c == '_') {
    width = 1;
    return true;
  }
  // U+2013 EN DASH, U+2014 EM DASH
  if (c == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x80) {
    const unsigned char c3 = static_cast<unsigned char>(s[i + 2]);
    if (c3 == 0x93 || c3 == 0x94) {
      width = 3;
      return true;
    }
  }
  return false;
}

struct BuiltinMode {
  const char* name;
  const char* first;
  const char* second;
  const char* description;
};

// Base set: seven atoms and seven diatomics.
constexpr BuiltinMode kBaseModes[] = {
    {"Analysis-Synthesis", "analysis", "synthesis",
     "Take a concept apart and put the parts back into a coherent whole."},
    {"Analogy", nullptr, nullptr, "Explain by structural or functional likeness."},
    {"Argument-Persuasion", "argument", "persuasion",
     "Reason toward a claim and move the reader to accept or act on it."},
    {"Cause-Effect", "cause", "effect", "Connect antecedents with their consequences."},
    {"Classification-Division", "classification", "division",
     "Group by shared traits, or partition a whole into parts."},
    {"Comparison-Contrast", "comparison", "contrast",
     "Set entities side by side for likeness and difference."},
    {"Definition", nullptr, nullptr, "Fix the meaning and boundaries of a term."},
    {"Description", nullptr, nullptr, "Render observable or sensory features."},
    {"Evaluation", nullptr, nullptr, "Judge quality or value against stated criteria."},
    {"Exemplification-Illustration", "exemplification", "evidence",
     "Back a general claim with instances and evidence."},
    {"Exposition", nullptr, nullptr, "Lay out information or ideas systematically."},
    {"Narration", nullptr, nullptr, "Relate events in temporal or logical order."},
    {"Problem-Solution", "problem", "solution",
     "State an issue and propose a way to resolve it."},
    {"Process Analysis", nullptr, nullptr, "Walk through the ordered steps of a task."},
};

// Atoms obtained by splitting the base diatomics.
constexpr BuiltinMode kDecomposedModes[] = {
    {"Classification", nullptr, nullptr, "Sort items into groups by a principle."},
    {"Division", nullptr, nullptr, "Break a whole into its constituent parts."},
    {"Cause", nullptr, nullptr, "Identify the conditions that produce a result."},
    {"Effect", nullptr, nullptr, "Trace the outcomes that follow from causes."},
    {"Exemplification", nullptr, nullptr, "Ground a claim in concrete cases."},
    {"Evidence", nullptr, nullptr, "Supply factual support for a claim."},
    {"Argument", nullptr, nullptr, "Advance a claim backed by reasons."},
    {"Persuasion", nullptr, nullptr, "Appeal to values or emotion to change minds."},
    {"Problem", nullptr, nullptr, "Frame a question, issue or gap."},
    {"Solution", nullptr, nullptr, "Propose and justify a remedy."},
    {"Comparison", nullptr, nullptr, "Bring out similarities."},
    {"Contrast", nullptr, nullptr, "Bring out differences."},
    {"Analysis", nullptr, nullptr, "Break a system down to expose its logic."},
    {"Synthesis", nullptr, nullptr, "Merge perspectives into one account."},
};

// Alternate spellings seen in the literature, mapped to canonical ids.
constexpr std::pair<const char*, const char*> kDefaultAliases[] = {
    {"narrative", "narration"},
    {"illustration", "evidence"},
    {"illustration-evidence", "evidence"},
    {"dvision", "division"},
    {"persuation", "persuasion"},
    {"argumentation", "argument"},
    {"argumentation-persuasion", "argument-persuasion"},
    {"argumentation-persuation", "argument-persuasion"},
    {"comparision", "comparison"},
    {"constrast", "contrast"},
    {"comparision-constrast", "comparison-contrast"},
    {"cause-and-effect", "cause-effect"},
    {"process", "process-analysis"},
    {"division-classification", "classification-division"},
};

Mode make_builtin(const BuiltinMode& entry, Origin origin) {
  Mode mode;
  mode.display_name = entry.name;
  mode.id = ModeId(entry.name);
  if (entry.first != nullptr) mode.constituents = {ModeId(entry.first), ModeId(entry.second)};
  mode.origin = std::move(origin);
  mode.description = entry.description;
  return mode;
}

const std::regex& id_pattern() {
  static const std::regex pattern("^[a-z][a-z0-9-]*$");
  return pattern;
}

void validate(const std::map<ModeId, Mode>& modes, const std::map<std::string, ModeId>& aliases) {
  for (const auto& [id, mode] : modes) {
    if (mode.constituents.size() == 1) {
      throw Error(ErrorKind::BadConstituent,
                  "mode '" + id.str() + "' has a single constituent; composites need at least two");
    }
    std::set<ModeId> seen;
    for (const ModeId& part : mode.constituents) {
      auto it = modes.find(part);
      if (it == modes.end()) {
        throw Error(ErrorKind::BadConstituent,
                    "mode '" + id.str() + "' references unknown constituent '" + part.str() + "'");
      }
      if (!it->second.is_atomic()) {
        throw Error(ErrorKind::BadConstituent, "mode '" + id.str() + "' references non-atomic constituent '" +
                                                   part.str() + "'");
      }
      if (!seen.insert(part).second) {
        throw Error(ErrorKind::BadConstituent,
                    "mode '" + id.str() + "' repeats constituent '" + part.str() + "'");
      }
    }
  }
  for (const auto& [alias, target] : aliases) {
    if (modes.count(ModeId(alias)) != 0) {
      throw Error(ErrorKind::DuplicateMode, "alias '" + alias + "' shadows a mode id");
    }
    if (modes.count(target) == 0) {
      throw Error(ErrorKind::BadConstituent,
                  "alias '" + alias + "' points at unknown mode '" + target.str() + "'");
    }
  }
}

std::string origin_kind_name(OriginKind kind) {
  switch (kind) {
    case OriginKind::base: return "base";
    case OriginKind::decomposed: return "decomposed";
    case OriginKind::generated: return "generated";
  }
  return "base";
}

json origin_to_json(const Origin& origin) {
  if (origin.kind != OriginKind::generated) return origin_kind_name(origin.kind);
  json inputs = json::array();
  for (const ModeId& input : origin.inputs) inputs.push_back(input.str());
  return json{{"kind", "generated"}, {"operator", origin.op}, {"inputs", inputs}};
}

Origin origin_from_json(const json& value, const std::string& id) {
  const auto bad = [&id](const std::string& why) {
    return Error(ErrorKind::ParseError, "mode '" + id + "': " + why);
  };
  if (value.is_null()) return Origin::base();
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    if (text == "base") return Origin::base();
    if (text == "decomposed") return Origin::decomposed();
    if (text == "generated") return Origin::generated("", {});
    throw bad("unknown origin '" + text + "'");
  }
  if (!value.is_object() || value.value("kind", "") != "generated") {
    throw bad("origin must be \"base\", \"decomposed\", \"generated\" or a generated object");
  }
  Origin origin = Origin::generated(value.value("operator", ""), {});
  if (value.contains("inputs")) {
    for (const auto& input : value.at("inputs")) origin.inputs.emplace_back(input.get<std::string>());
  }
  return origin;
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

std::string canonicalize(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  bool pending_separator = false;
  for (std::size_t i = 0; i < name.size();) {
    std::size_t width = 0;
    if (is_separator_at(name, i, width)) {
      pending_separator = true;
      i += width;
      continue;
    }
    if (pending_separator && !out.empty()) out.push_back('-');
    pending_separator = false;
    const char c = name[i];
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    ++i;
  }
  return out;
}

std::string_view arity_name(Arity arity) noexcept {
  switch (arity) {
    case Arity::atomic: return "atomic";
    case Arity::diatomic: return "diatomic";
    case Arity::compound: return "compound";
  }
  return "atomic";
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitution});
      diagonal = above;
    }
  }
  return row[b.size()];
}

Registry Registry::from_modes(std::string version, std::vector<Mode> modes,
                              std::map<std::string, ModeId> aliases) {
  Registry registry;
  registry.version_ = std::move(version);
  for (Mode& mode : modes) {
    if (mode.id.empty()) throw Error(ErrorKind::ParseError, "mode with empty id");
    const ModeId id = mode.id;
    if (!registry.modes_.emplace(id, std::move(mode)).second) {
      throw Error(ErrorKind::DuplicateMode, "duplicate mode id '" + id.str() + "'");
    }
  }
  for (auto& [alias, target] : aliases) registry.aliases_.emplace(canonicalize(alias), target);
  validate(registry.modes_, registry.aliases_);
  return registry;
}

Registry Registry::builtin() {
  std::vector<Mode> modes;
  for (const auto& entry : kBaseModes) modes.push_back(make_builtin(entry, Origin::base()));
  for (const auto& entry : kDecomposedModes) modes.push_back(make_builtin(entry, Origin::decomposed()));
  // Listed as "Illustration (Evidence)"; the id follows the cognitive mapping.
  for (Mode& mode : modes) {
    if (mode.id.str() == "evidence") mode.display_name = "Illustration (Evidence)";
  }
  std::map<std::string, ModeId> aliases;
  for (const auto& [alias, target] : kDefaultAliases) aliases.emplace(alias, ModeId(target));
  return from_modes("builtin-1", std::move(modes), std::move(aliases));
}

Registry Registry::extended(std::vector<Mode> extra) const {
  std::vector<Mode> all;
  all.reserve(modes_.size() + extra.size());
  for (const auto& [id, mode] : modes_) all.push_back(mode);
  for (Mode& mode : extra) all.push_back(std::move(mode));
  return from_modes(version_, std::move(all), aliases_);
}

Registry Registry::subset(const std::function<bool(const Mode&)>& keep) const {
  std::map<ModeId, Mode> kept;
  for (const auto& [id, mode] : modes_) {
    if (keep(mode)) kept.emplace(id, mode);
  }
  for (auto it = kept.begin(); it != kept.end();) {
    const bool complete = std::all_of(it->second.constituents.begin(), it->second.constituents.end(),
                                      [&kept](const ModeId& part) { return kept.count(part) != 0; });
    it = complete ? std::next(it) : kept.erase(it);
  }
  Registry out;
  out.version_ = version_;
  out.modes_ = std::move(kept);
  for (const auto& [alias, target] : aliases_) {
    if (out.modes_.count(target) != 0) out.aliases_.emplace(alias, target);
  }
  return out;
}

const Mode* Registry::find(const ModeId& id) const noexcept {
  auto it = modes_.find(id);
  return it == modes_.end() ? nullptr : &it->second;
}

const Mode* Registry::find(std::string_view name) const noexcept {
  const ModeId id(name);
  if (const Mode* mode = find(id)) return mode;
  auto alias = aliases_.find(id.str());
  return alias == aliases_.end() ? nullptr : find(alias->second);
}

const Mode& Registry::resolve(std::string_view name) const {
  if (const Mode* mode = find(name)) return *mode;
  const std::string wanted = canonicalize(name);
  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const auto& [id, mode] : modes_) ranked.emplace_back(edit_distance(wanted, id.str()), id.str());
  for (const auto& [alias, target] : aliases_) {
    ranked.emplace_back(edit_distance(wanted, alias), target.str());
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> suggestions;
  for (const auto& [distance, id] : ranked) {
    if (suggestions.size() == 2 || distance > 3) break;
    if (std::find(suggestions.begin(), suggestions.end(), id) == suggestions.end()) {
      suggestions.push_back(id);
    }
  }
  std::string message = "no mode named '" + std::string(name) + "'";
  if (!suggestions.empty()) {
    message += " (did you mean ";
    for (std::size_t i = 0; i < suggestions.size(); ++i) {
      message += (i ? ", " : "") + suggestions[i];
    }
    message += "?)";
  }
  throw Error(ErrorKind::UnknownMode, std::move(message), std::nullopt, std::move(suggestions));
}

const Mode* Registry::find_composition(const std::vector<ModeId>& constituents) const noexcept {
  std::vector<ModeId> wanted = constituents;
  std::sort(wanted.begin(), wanted.end());
  for (const auto& [id, mode] : modes_) {
    if (mode.constituents.size() != wanted.size()) continue;
    std::vector<ModeId> have = mode.constituents;
    std::sort(have.begin(), have.end());
    if (have == wanted) return &mode;
  }
  return nullptr;
}

std::vector<Mode> Registry::atoms() const {
  std::vector<Mode> out;
  for (const auto& [id, mode] : modes_) {
    if (mode.is_atomic()) out.push_back(mode);
  }
  return out;
}

std::vector<Mode> atoms(const Registry& registry) { return registry.atoms(); }

Registry load_registry(std::string_view json_text) {
  json document;
  try {
    document = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(json_text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorKind::ParseError,
                "malformed registry document at column " + std::to_string(column) + ": " + e.what(),
                line);
  }
  try {
    if (!document.is_object() || !document.contains("modes") || !document.at("modes").is_array()) {
      throw Error(ErrorKind::ParseError, "registry document needs an object with a \"modes\" array");
    }
    std::vector<Mode> modes;
    std::map<std::string, ModeId> aliases;
    const std::string extends = document.value("extends", "none");
    if (extends == "builtin") {
      const Registry base = Registry::builtin();
      for (const auto& [id, mode] : base.modes()) modes.push_back(mode);
      aliases = base.aliases();
    } else if (extends != "none") {
      throw Error(ErrorKind::ParseError, "unknown \"extends\" value '" + extends + "'");
    }
    for (const auto& entry : document.at("modes")) {
      const std::string raw_id = entry.at("id").get<std::string>();
      if (!std::regex_match(raw_id, id_pattern())) {
        throw Error(ErrorKind::ParseError, "mode id '" + raw_id + "' does not match ^[a-z][a-z0-9-]*$");
      }
      Mode mode;
      mode.id = ModeId(raw_id);
      mode.display_name = entry.value("display_name", raw_id);
      mode.description = entry.value("description", "");
      if (entry.contains("constituents")) {
        for (const auto& part : entry.at("constituents")) mode.constituents.emplace_back(part.get<std::string>());
      }
      mode.origin = origin_from_json(entry.value("origin", json()), raw_id);
      const std::string arity = entry.value("arity", std::string(arity_name(mode.arity())));
      if (arity != arity_name(mode.arity())) {
        throw Error(ErrorKind::BadConstituent, "mode '" + raw_id + "' declares arity " + arity + " but lists " +
                                                   std::to_string(mode.constituents.size()) + " constituents");
      }
      modes.push_back(std::move(mode));
    }
    if (document.contains("aliases")) {
      for (const auto& [alias, target] : document.at("aliases").items()) {
        aliases[canonicalize(alias)] = ModeId(target.get<std::string>());
      }
    }
    return Registry::from_modes(document.value("version", ""), std::move(modes), std::move(aliases));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("registry document: ") + e.what());
  }
}

Registry load_registry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open registry file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_registry(buffer.str());
}

std::string serialize_registry(const Registry& registry) {
  json modes = json::array();
  for (const auto& [id, mode] : registry.modes()) {
    json constituents = json::array();
    for (const ModeId& part : mode.constituents) constituents.push_back(part.str());
    modes.push_back({{"id", id.str()},
                     {"display_name", mode.display_name},
                     {"arity", arity_name(mode.arity())},
                     {"constituents", constituents},
                     {"origin", origin_to_json(mode.origin)},
                     {"description", mode.description}});
  }
  json aliases = json::object();
  for (const auto& [alias, target] : registry.aliases()) aliases[alias] = target.str();
  json document{{"version", registry.version()}, {"modes", modes}, {"aliases", aliases}};
  return document.dump(2) + "\n";
}

}  // namespace rhetor
