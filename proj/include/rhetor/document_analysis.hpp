#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rhetor/capacity_metrics.hpp"
#include "rhetor/mode_registry.hpp"
#include "rhetor/pyramid_mapping.hpp"

namespace rhetor {

struct Segment {
  std::size_t index = 0;
  std::string stage;
  std::vector<ModeId> modes;  // listed order, duplicates removed
  std::string text;
  std::size_t line = 0;       // source line, 0 when built in memory

  // Mode sets compare order-insensitively; the source line is not content.
  friend bool operator==(const Segment& a, const Segment& b);
};

struct AnnotatedDocument {
  std::string id;
  std::vector<Segment> segments;
  std::optional<unsigned> declared_width;

  // Stage labels in order of first appearance.
  std::vector<std::string> stages() const;
  // Union of all segment modes, sorted.
  std::vector<ModeId> used_modes() const;
  // Union of modes within one stage, sorted.
  std::vector<ModeId> stage_modes(std::string_view stage) const;

  friend bool operator==(const AnnotatedDocument&, const AnnotatedDocument&) = default;
};

// Line-based annotation format (.rma):
//   # comment
//   doc <id>
//   declared_K <n>
//   stage <label>
//   seg [<index>] | <mode>, <mode>, ... | <optional free text>
//   @modes: <mode>, <mode>, ...
// Mode names resolve through the registry (aliases included).
AnnotatedDocument parse_document(const Registry& registry, std::string_view text);
AnnotatedDocument parse_document_file(const Registry& registry, const std::string& path);
std::string serialize_document(const AnnotatedDocument& document);

// K_u = distinct modes used; K = `width` if given, else the declared width.
CoverageReport analyze_coverage(const AnnotatedDocument& document, std::optional<unsigned> width = std::nullopt);

// Which cognitive functions (and epistemic purpose) each stage is meant to
// serve.
struct StageMapping {
  std::string stage;
  std::vector<std::string> cognitive;
  std::string epistemic;
};

// {"stages":[{"stage": "...", "cognitive": [...], "epistemic": "..."}]}
std::vector<StageMapping> load_stage_map(std::string_view json_text);

struct StageTrace {
  std::string stage;
  std::vector<std::string> cognitive;
  std::string epistemic;
  std::vector<ModeId> expected;  // union of realizers of the cognitive functions
  std::vector<ModeId> observed;
  std::vector<ModeId> overlap;   // observed and expected
  std::vector<ModeId> mismatch;  // observed but not expected
  std::vector<ModeId> unused;    // expected but not observed
  // Cognitive functions the stated epistemic node does not list.
  std::vector<std::string> cognitive_outside_epistemic;
};

struct LayerTrace {
  std::vector<StageTrace> stages;
  std::vector<std::string> epistemic;  // distinct E nodes, first-seen order
};

LayerTrace trace_layers(const AnnotatedDocument& document, const PyramidGraph& graph,
                        std::span<const StageMapping> stage_map);

struct StagedDocument {
  double stage = 0.0;
  AnnotatedDocument document;
};

struct RriInterval {
  double from = 0.0;
  double to = 0.0;
  std::vector<ModeId> introduced;  // first global appearance in the later stage
  double rate = 0.0;               // L_n = |introduced| / (to - from)
};

struct RriReport {
  std::vector<RriInterval> intervals;
  std::vector<std::pair<double, std::size_t>> cumulative;  // (stage, K so far)
};

// Rate of rhetorical introduction across a corpus timeline.
RriReport estimate_rri(std::span<const StagedDocument> documents);

struct ScheduleStage {
  std::string name;
  unsigned width = 0;       // cumulative K
  double duration = 1.0;    // stage units
  double rate = 0.0;        // L_n
  std::string reference;    // rate quoted by the source table, text only
};

struct StageSchedule {
  std::vector<ScheduleStage> stages;
};

// KG through Graduate. Rates derived as delta-K / duration.
StageSchedule default_schedule();

// {"stages":[{"name","K","duration"?,"L_n"?,"reference"?}]}. Missing L_n is
// derived from the K delta. Throws BadSchedule for decreasing K.
StageSchedule load_schedule(std::string_view json_text);
void validate_schedule(const StageSchedule& schedule);

struct ConeRow {
  std::string stage;
  unsigned width = 0;
  Exact nonempty_combinations = 0;
  double capacity_bits = 0.0;
  double scale_bits = 0.0;
  double normalized_load = 0.0;
  LoadClass load = LoadClass::subcritical;
};

std::vector<ConeRow> cone(const StageSchedule& schedule, double learner_capacity = 1.0);

}  // namespace rhetor
