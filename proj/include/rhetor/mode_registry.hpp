#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rhetor {

// Lowercase, hyphen-separated form of a mode name. Runs of whitespace,
// underscores, hyphens, en/em dashes collapse to a single '-'.
// canonicalize(canonicalize(s)) == canonicalize(s).
std::string canonicalize(std::string_view name);

// Stable key of a mode: always holds a canonical name.
class ModeId {
 public:
  ModeId() = default;
  explicit ModeId(std::string_view name) : value_(canonicalize(name)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const ModeId&, const ModeId&) = default;
  friend auto operator<=>(const ModeId&, const ModeId&) = default;

 private:
  std::string value_;
};

enum class Arity { atomic, diatomic, compound };

std::string_view arity_name(Arity arity) noexcept;

enum class OriginKind { base, decomposed, generated };

// Where a mode came from. Generated modes record exactly one operator
// application (operator name plus input ids).
struct Origin {
  OriginKind kind = OriginKind::base;
  std::string op;
  std::vector<ModeId> inputs;

  static Origin base() { return {}; }
  static Origin decomposed() { return {OriginKind::decomposed, {}, {}}; }
  static Origin generated(std::string op, std::vector<ModeId> inputs) {
    return {OriginKind::generated, std::move(op), std::move(inputs)};
  }

  friend bool operator==(const Origin&, const Origin&) = default;
};

struct Mode {
  ModeId id;
  std::string display_name;
  std::vector<ModeId> constituents;  // empty iff atomic
  Origin origin;
  std::string description;

  Arity arity() const noexcept {
    if (constituents.empty()) return Arity::atomic;
    return constituents.size() == 2 ? Arity::diatomic : Arity::compound;
  }
  bool is_atomic() const noexcept { return constituents.empty(); }

  friend bool operator==(const Mode&, const Mode&) = default;
};

// Immutable universe of modes plus an alias table. Construction validates:
// unique ids, aliases pointing at known ids, and every constituent of a
// composite mode resolving to an atomic mode of the same registry.
class Registry {
 public:
  Registry() = default;

  static Registry from_modes(std::string version, std::vector<Mode> modes,
                             std::map<std::string, ModeId> aliases = {});

  // The 14 base modes plus their 14 decompositions, with the default aliases.
  static Registry builtin();

  // New registry holding this one's modes and aliases plus `extra`.
  Registry extended(std::vector<Mode> extra) const;

  // Modes satisfying `keep`; composites whose constituents were dropped go too.
  Registry subset(const std::function<bool(const Mode&)>& keep) const;

  // Case/whitespace/dash-insensitive lookup through ids then aliases.
  // Throws UnknownMode with up to two edit-distance suggestions.
  const Mode& resolve(std::string_view name) const;
  const Mode* find(std::string_view name) const noexcept;
  const Mode* find(const ModeId& id) const noexcept;
  bool contains(const ModeId& id) const noexcept { return modes_.count(id) != 0; }

  // Diatomic or compound mode with exactly this constituent set, if any.
  const Mode* find_composition(const std::vector<ModeId>& constituents) const noexcept;

  std::vector<Mode> atoms() const;

  const std::map<ModeId, Mode>& modes() const noexcept { return modes_; }
  const std::map<std::string, ModeId>& aliases() const noexcept { return aliases_; }
  const std::string& version() const noexcept { return version_; }
  std::size_t size() const noexcept { return modes_.size(); }

  // Order-insensitive; the version string is part of equality.
  friend bool operator==(const Registry&, const Registry&) = default;

 private:
  std::string version_;
  std::map<ModeId, Mode> modes_;
  std::map<std::string, ModeId> aliases_;
};

std::vector<Mode> atoms(const Registry& registry);

// Registry documents (JSON). An absent source yields Registry::builtin().
// A document with "extends": "builtin" adds its modes to the default set.
Registry load_registry(std::string_view json_text);
Registry load_registry_file(const std::string& path);
std::string serialize_registry(const Registry& registry);

std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace rhetor
