#include "rhetor/document_analysis.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rhetor/errors.hpp"

namespace rhetor {

using json = nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool starts_with_word(std::string_view line, std::string_view word, std::string_view& rest) {
  if (line.substr(0, word.size()) != word) return false;
  if (line.size() > word.size() && line[word.size()] != ' ' && line[word.size()] != '\t') return false;
  rest = trim(line.substr(word.size()));
  return true;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<ModeId> resolve_modes(const Registry& registry, std::string_view list, std::size_t line) {
  std::vector<ModeId> modes;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const std::string_view name =
        trim(list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!name.empty()) {
      try {
        const ModeId id = registry.resolve(name).id;
        if (std::find(modes.begin(), modes.end(), id) == modes.end()) modes.push_back(id);
      } catch (const Error& e) {
        throw Error(e.kind(), e.message(), line, e.suggestions());
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (modes.empty()) throw Error(ErrorKind::EmptySegment, "segment lists no modes", line);
  return modes;
}

std::vector<ModeId> sorted(std::vector<ModeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<ModeId> difference(const std::vector<ModeId>& a, const std::vector<ModeId>& b) {
  std::vector<ModeId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<ModeId> intersection(const std::vector<ModeId>& a, const std::vector<ModeId>& b) {
  std::vector<ModeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

bool operator==(const Segment& a, const Segment& b) {
  return a.index == b.index && a.stage == b.stage && a.text == b.text && sorted(a.modes) == sorted(b.modes);
}

std::vector<std::string> AnnotatedDocument::stages() const {
  std::vector<std::string> out;
  for (const Segment& segment : segments) {
    if (std::find(out.begin(), out.end(), segment.stage) == out.end()) out.push_back(segment.stage);
  }
  return out;
}

std::vector<ModeId> AnnotatedDocument::used_modes() const {
  std::vector<ModeId> all;
  for (const Segment& segment : segments) all.insert(all.end(), segment.modes.begin(), segment.modes.end());
  return sorted(std::move(all));
}

std::vector<ModeId> AnnotatedDocument::stage_modes(std::string_view stage) const {
  std::vector<ModeId> all;
  for (const Segment& segment : segments) {
    if (segment.stage == stage) all.insert(all.end(), segment.modes.begin(), segment.modes.end());
  }
  return sorted(std::move(all));
}

AnnotatedDocument parse_document(const Registry& registry, std::string_view text) {
  AnnotatedDocument document;
  bool have_id = false;
  std::optional<std::string> stage;
  std::size_t line_number = 0;
  std::size_t last_index = 0;

  std::size_t start = 0;
  while (start <= text.size()) {
    const auto newline = text.find('\n', start);
    const std::string_view raw =
        text.substr(start, newline == std::string_view::npos ? std::string_view::npos : newline - start);
    start = newline == std::string_view::npos ? text.size() + 1 : newline + 1;
    ++line_number;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::string_view rest;
    if (starts_with_word(line, "doc", rest)) {
      if (have_id) throw Error(ErrorKind::ParseError, "second 'doc' header", line_number);
      if (rest.empty()) throw Error(ErrorKind::ParseError, "'doc' needs an id", line_number);
      document.id = std::string(rest);
      have_id = true;
    } else if (starts_with_word(line, "declared_K", rest)) {
      const auto width = parse_int<unsigned>(rest);
      if (!width || *width == 0) {
        throw Error(ErrorKind::ParseError, "'declared_K' needs a positive integer", line_number);
      }
      document.declared_width = *width;
    } else if (starts_with_word(line, "stage", rest)) {
      if (rest.empty()) throw Error(ErrorKind::ParseError, "'stage' needs a label", line_number);
      stage = std::string(rest);
    } else if (line.substr(0, 3) == "seg" || line.substr(0, 7) == "@modes:") {
      if (!stage) throw Error(ErrorKind::ParseError, "segment before any 'stage' line", line_number);
      Segment segment;
      segment.stage = *stage;
      segment.line = line_number;
      std::optional<std::size_t> explicit_index;
      if (line.front() == '@') {
        segment.modes = resolve_modes(registry, line.substr(7), line_number);
      } else {
        const auto bar = line.find('|');
        if (bar == std::string_view::npos) {
          throw Error(ErrorKind::ParseError, "segment line needs 'seg | modes | text'", line_number);
        }
        const std::string_view head = trim(line.substr(3, bar - 3));
        if (line.size() > 3 && line[3] != ' ' && line[3] != '\t' && line[3] != '|') {
          throw Error(ErrorKind::ParseError, "unknown directive '" + std::string(line) + "'", line_number);
        }
        if (!head.empty()) {
          explicit_index = parse_int<std::size_t>(head);
          if (!explicit_index) {
            throw Error(ErrorKind::ParseError, "segment index must be a non-negative integer", line_number);
          }
        }
        const std::string_view body = line.substr(bar + 1);
        const auto second_bar = body.find('|');
        segment.modes = resolve_modes(
            registry, second_bar == std::string_view::npos ? body : body.substr(0, second_bar), line_number);
        if (second_bar != std::string_view::npos) segment.text = std::string(trim(body.substr(second_bar + 1)));
      }
      if (explicit_index) {
        if (!document.segments.empty() && *explicit_index <= last_index) {
          throw Error(ErrorKind::BadIndex,
                      "segment index " + std::to_string(*explicit_index) + " does not follow " +
                          std::to_string(last_index),
                      line_number);
        }
        segment.index = *explicit_index;
      } else {
        segment.index = document.segments.empty() ? 1 : last_index + 1;
      }
      last_index = segment.index;
      document.segments.push_back(std::move(segment));
    } else {
      throw Error(ErrorKind::ParseError, "unknown directive '" + std::string(line) + "'", line_number);
    }
  }

  if (document.declared_width && *document.declared_width < document.used_modes().size()) {
    throw Error(ErrorKind::BadCount, "declared_K " + std::to_string(*document.declared_width) +
                                         " is smaller than the " + std::to_string(document.used_modes().size()) +
                                         " distinct modes used");
  }
  return document;
}

AnnotatedDocument parse_document_file(const Registry& registry, const std::string& path) {
  return parse_document(registry, read_file(path));
}

std::string serialize_document(const AnnotatedDocument& document) {
  std::ostringstream out;
  if (!document.id.empty()) out << "doc " << document.id << "\n";
  if (document.declared_width) out << "declared_K " << *document.declared_width << "\n";
  std::optional<std::string> stage;
  for (const Segment& segment : document.segments) {
    if (!stage || *stage != segment.stage) {
      out << "stage " << segment.stage << "\n";
      stage = segment.stage;
    }
    out << "seg " << segment.index << " | ";
    for (std::size_t i = 0; i < segment.modes.size(); ++i) out << (i ? ", " : "") << segment.modes[i].str();
    out << " |";
    if (!segment.text.empty()) out << " " << segment.text;
    out << "\n";
  }
  return out.str();
}

CoverageReport analyze_coverage(const AnnotatedDocument& document, std::optional<unsigned> width) {
  const auto used = static_cast<unsigned>(document.used_modes().size());
  const std::optional<unsigned> available = width ? width : document.declared_width;
  if (!available) {
    throw Error(ErrorKind::BadCount, "no width given and the document declares none");
  }
  return coverage(used, *available);
}

std::vector<StageMapping> load_stage_map(std::string_view json_text) {
  try {
    const json document = json::parse(json_text);
    std::vector<StageMapping> out;
    for (const auto& entry : document.at("stages")) {
      StageMapping mapping;
      mapping.stage = entry.at("stage").get<std::string>();
      mapping.cognitive = entry.value("cognitive", std::vector<std::string>{});
      mapping.epistemic = entry.value("epistemic", "");
      out.push_back(std::move(mapping));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("stage map: ") + e.what());
  }
}

LayerTrace trace_layers(const AnnotatedDocument& document, const PyramidGraph& graph,
                        std::span<const StageMapping> stage_map) {
  LayerTrace trace;
  for (const std::string& stage : document.stages()) {
    const auto mapping = std::find_if(stage_map.begin(), stage_map.end(),
                                      [&stage](const StageMapping& m) { return m.stage == stage; });
    if (mapping == stage_map.end()) {
      throw Error(ErrorKind::UnmappedStage, "stage '" + stage + "' has no entry in the stage map");
    }
    StageTrace row;
    row.stage = stage;
    row.epistemic = mapping->epistemic;
    std::vector<ModeId> expected;
    for (const std::string& cognitive : mapping->cognitive) {
      const std::vector<LayerNode> modes = realizers(graph, Layer::C, cognitive);
      row.cognitive.push_back(graph.node(Layer::C, cognitive)->id);
      for (const LayerNode& mode : modes) expected.emplace_back(mode.id);
    }
    row.expected = sorted(std::move(expected));
    row.observed = document.stage_modes(stage);
    row.overlap = intersection(row.observed, row.expected);
    row.mismatch = difference(row.observed, row.expected);
    row.unused = difference(row.expected, row.observed);
    if (!mapping->epistemic.empty()) {
      const std::vector<LayerNode> served = realizers(graph, Layer::E, mapping->epistemic);
      row.epistemic = graph.node(Layer::E, mapping->epistemic)->id;
      for (const std::string& cognitive : row.cognitive) {
        const bool listed = std::any_of(served.begin(), served.end(),
                                        [&cognitive](const LayerNode& n) { return n.id == cognitive; });
        if (!listed) row.cognitive_outside_epistemic.push_back(cognitive);
      }
      if (std::find(trace.epistemic.begin(), trace.epistemic.end(), row.epistemic) == trace.epistemic.end()) {
        trace.epistemic.push_back(row.epistemic);
      }
    }
    trace.stages.push_back(std::move(row));
  }
  return trace;
}

RriReport estimate_rri(std::span<const StagedDocument> documents) {
  if (documents.size() < 2) {
    throw Error(ErrorKind::NotEnoughStages, "rate estimation needs at least two stages");
  }
  for (std::size_t i = 1; i < documents.size(); ++i) {
    if (!(documents[i].stage > documents[i - 1].stage)) {
      throw Error(ErrorKind::BadIndex, "stage indices must be strictly increasing");
    }
  }
  RriReport report;
  std::vector<ModeId> seen = documents.front().document.used_modes();
  report.cumulative.emplace_back(documents.front().stage, seen.size());
  for (std::size_t i = 1; i < documents.size(); ++i) {
    RriInterval interval;
    interval.from = documents[i - 1].stage;
    interval.to = documents[i].stage;
    interval.introduced = difference(documents[i].document.used_modes(), seen);
    interval.rate = static_cast<double>(interval.introduced.size()) / (interval.to - interval.from);
    seen = sorted([&] {
      std::vector<ModeId> merged = seen;
      merged.insert(merged.end(), interval.introduced.begin(), interval.introduced.end());
      return merged;
    }());
    report.cumulative.emplace_back(interval.to, seen.size());
    report.intervals.push_back(std::move(interval));
  }
  return report;
}

StageSchedule default_schedule() {
  StageSchedule schedule{{
      {"KG (Preschool)", 2, 3.0, 0.0, "<0.33"},
      {"Elementary School", 5, 6.0, 0.0, "~0.33"},
      {"Middle School", 8, 3.0, 0.0, "~0.66"},
      {"High School", 12, 3.0, 0.0, "~0.66"},
      {"Undergraduate", 16, 4.0, 0.0, "~1"},
      {"Graduate", 20, 5.0, 0.0, ">1"},
  }};
  unsigned previous = 0;
  for (ScheduleStage& stage : schedule.stages) {
    stage.rate = (stage.width - previous) / stage.duration;
    previous = stage.width;
  }
  return schedule;
}

void validate_schedule(const StageSchedule& schedule) {
  if (schedule.stages.empty()) throw Error(ErrorKind::BadSchedule, "schedule has no stages");
  unsigned previous = 0;
  for (const ScheduleStage& stage : schedule.stages) {
    if (stage.width == 0 || stage.width > kMaxExactWidth) {
      throw Error(ErrorKind::OutOfRange, "stage '" + stage.name + "' width outside 1.." +
                                             std::to_string(kMaxExactWidth));
    }
    if (stage.width < previous) {
      throw Error(ErrorKind::BadSchedule, "stage '" + stage.name + "' lowers K from " + std::to_string(previous) +
                                              " to " + std::to_string(stage.width));
    }
    if (!(stage.duration > 0.0)) throw Error(ErrorKind::BadSchedule, "stage '" + stage.name + "' has no duration");
    if (!(stage.rate >= 0.0)) throw Error(ErrorKind::BadSchedule, "stage '" + stage.name + "' has negative L_n");
    previous = stage.width;
  }
}

StageSchedule load_schedule(std::string_view json_text) {
  StageSchedule schedule;
  try {
    const json document = json::parse(json_text);
    unsigned previous = 0;
    for (const auto& entry : document.at("stages")) {
      ScheduleStage stage;
      stage.name = entry.at("name").get<std::string>();
      const auto width = entry.at("K").get<long long>();
      if (width <= 0 || width > static_cast<long long>(kMaxExactWidth)) {
        throw Error(ErrorKind::OutOfRange, "stage '" + stage.name + "' width outside 1.." +
                                               std::to_string(kMaxExactWidth));
      }
      stage.width = static_cast<unsigned>(width);
      stage.duration = entry.value("duration", 1.0);
      stage.reference = entry.value("reference", "");
      if (entry.contains("L_n")) {
        stage.rate = entry.at("L_n").get<double>();
      } else {
        const double delta = static_cast<double>(stage.width) - static_cast<double>(previous);
        stage.rate = stage.duration > 0.0 ? std::max(delta, 0.0) / stage.duration : 0.0;
      }
      previous = stage.width;
      schedule.stages.push_back(std::move(stage));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("schedule: ") + e.what());
  }
  validate_schedule(schedule);
  return schedule;
}

std::vector<ConeRow> cone(const StageSchedule& schedule, double learner_capacity) {
  validate_schedule(schedule);
  std::vector<ConeRow> rows;
  for (const ScheduleStage& stage : schedule.stages) {
    const CapacityReport capacity_report = capacity(stage.width);
    const GrowthParams params = growth(stage.rate, learner_capacity);
    rows.push_back({stage.name, stage.width, capacity_report.nonempty_combinations, capacity_report.capacity_bits,
                    params.scale_bits, params.normalized_load, params.load});
  }
  return rows;
}

}  // namespace rhetor
