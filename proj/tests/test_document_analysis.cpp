#include <functional>
#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "rhetor/document_analysis.hpp"
#include "rhetor/errors.hpp"
#include "support.hpp"

using namespace rhetor;

namespace {

const Registry& registry() {
  static const Registry r = Registry::builtin();
  return r;
}

Error error_of(const std::function<void()>& action) {
  try {
    action();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorKind::ParseError, "unreachable");
}

std::set<std::string> ids(const std::vector<ModeId>& modes) {
  std::set<std::string> out;
  for (const ModeId& m : modes) out.insert(m.str());
  return out;
}

// Realizers per cognitive function, read from the transcribed table.
std::set<std::string> expected_for(const std::vector<std::string>& cognitive) {
  std::set<std::string> out;
  for (const auto& row : support::read_csv("tests/fixtures/table4_edges.csv")) {
    if (std::find(cognitive.begin(), cognitive.end(), row[1]) != cognitive.end()) {
      out.insert(registry().resolve(row[2]).id.str());
    }
  }
  return out;
}

std::set<std::string> minus(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

AnnotatedDocument random_document(std::mt19937& rng, const std::vector<Mode>& pool) {
  AnnotatedDocument doc;
  doc.id = "random-" + std::to_string(rng() % 1000);
  const std::size_t segments = rng() % 6;
  std::size_t index = 0;
  for (std::size_t s = 0; s < segments; ++s) {
    Segment seg;
    index += 1 + rng() % 3;
    seg.index = index;
    seg.stage = "Stage " + std::to_string(1 + s / 2);
    const std::size_t count = 1 + rng() % 4;
    for (std::size_t m = 0; m < count; ++m) {
      const ModeId id = pool[rng() % pool.size()].id;
      if (std::find(seg.modes.begin(), seg.modes.end(), id) == seg.modes.end()) seg.modes.push_back(id);
    }
    if (rng() % 2) seg.text = "segment text " + std::to_string(s);
    doc.segments.push_back(std::move(seg));
  }
  if (rng() % 2) doc.declared_width = static_cast<unsigned>(registry().size());
  return doc;
}

}  // namespace

TEST_CASE("lesson fixture parses into three parts") {
  const AnnotatedDocument doc = parse_document_file(registry(), support::source_path("data/lesson_memory.rma"));
  CHECK(doc.id == "lesson-memory");
  REQUIRE(doc.segments.size() == 3);
  CHECK(doc.stages() == std::vector<std::string>{"Part I", "Part II", "Part III"});
  CHECK(ids(doc.segments[0].modes) == std::set<std::string>{"narration", "definition", "exemplification", "evidence"});
  CHECK(doc.segments[1].modes.size() == 6);
  CHECK(ids(doc.segments[2].modes) == std::set<std::string>{"persuasion", "exposition", "problem", "evaluation"});
  CHECK(doc.segments[0].line == 6);
}

TEST_CASE("lesson coverage against the union oracle") {
  const std::vector<std::vector<std::string>> parts = {
      {"narration", "definition", "exemplification", "evidence"},
      {"description", "analogy", "classification", "contrast", "effect", "process-analysis"},
      {"persuasion", "exposition", "problem", "evaluation"}};
  std::set<std::string> all;
  for (const auto& part : parts) all.insert(part.begin(), part.end());

  const AnnotatedDocument doc = parse_document_file(registry(), support::source_path("data/lesson_memory.rma"));
  CHECK(ids(doc.used_modes()) == all);
  const CoverageReport cov = analyze_coverage(doc, 20u);
  CHECK(cov.used == all.size());
  CHECK(cov.coverage == doctest::Approx(static_cast<double>(all.size()) / 20.0));
  CHECK(cov.coverage == doctest::Approx(0.7));
}

TEST_CASE("lesson trace against the table oracle") {
  const AnnotatedDocument doc = parse_document_file(registry(), support::source_path("data/lesson_memory.rma"));
  const PyramidGraph graph = load_pyramid(registry(), "default");
  const auto stage_map = load_stage_map(support::read_file("data/lesson-map.json"));
  const LayerTrace trace = trace_layers(doc, graph, stage_map);
  REQUIRE(trace.stages.size() == 3);
  CHECK(trace.epistemic == std::vector<std::string>{"teaching-learning"});

  const std::vector<std::vector<std::string>> cognitive = {
      {"Observe", "Identify"}, {"Model", "Explain"}, {"Evaluate", "Reflect / Meta-cognitive Assessment"}};
  for (std::size_t i = 0; i < 3; ++i) {
    const StageTrace& s = trace.stages[i];
    const std::set<std::string> expected = expected_for(cognitive[i]);
    const std::set<std::string> observed = ids(doc.stage_modes(s.stage));
    CAPTURE(s.stage);
    CHECK(ids(s.expected) == expected);
    CHECK(ids(s.observed) == observed);
    CHECK(ids(s.mismatch) == minus(observed, expected));
    CHECK(ids(s.unused) == minus(expected, observed));
    CHECK(s.cognitive_outside_epistemic.empty());
  }
  CHECK(trace.stages[0].mismatch.empty());
  CHECK(ids(trace.stages[1].mismatch) == std::set<std::string>{"classification", "contrast", "description", "effect"});
  CHECK(ids(trace.stages[2].mismatch) == std::set<std::string>{"problem"});
}

TEST_CASE("trace errors and edge cases") {
  const PyramidGraph graph = load_pyramid(registry(), "default");
  CHECK(trace_layers(AnnotatedDocument{}, graph, {}).stages.empty());
  const AnnotatedDocument doc = parse_document(registry(), "stage Opening\nseg | narration |\n");
  CHECK(error_of([&] { trace_layers(doc, graph, {}); }).kind() == ErrorKind::UnmappedStage);
  const std::vector<StageMapping> bad = {{"Opening", {"daydream"}, ""}};
  CHECK(error_of([&] { trace_layers(doc, graph, bad); }).kind() == ErrorKind::UnknownNode);
  const std::vector<StageMapping> off = {{"Opening", {"predict"}, "knowledge-formation"}};
  CHECK(trace_layers(doc, graph, off).stages[0].cognitive_outside_epistemic == std::vector<std::string>{"predict"});
  CHECK(error_of([] { load_stage_map("[]"); }).kind() == ErrorKind::ParseError);
}

TEST_CASE("parse diagnostics") {
  SUBCASE("empty mode list") {
    const Error e = error_of([] { parse_document(registry(), "stage A\n@modes:\n"); });
    CHECK(e.kind() == ErrorKind::EmptySegment);
    CHECK(e.line() == std::optional<std::size_t>(2));
  }
  SUBCASE("unknown mode") {
    const Error e = error_of([] { parse_document(registry(), "doc x\nstage A\nseg | narration, telepathy |\n"); });
    CHECK(e.kind() == ErrorKind::UnknownMode);
    CHECK(e.line() == std::optional<std::size_t>(3));
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  SUBCASE("repeated index") {
    const Error e = error_of([] { parse_document(registry(), "stage A\nseg 2 | narration |\nseg 2 | analogy |\n"); });
    CHECK(e.kind() == ErrorKind::BadIndex);
    CHECK(e.line() == std::optional<std::size_t>(3));
  }
  SUBCASE("structure") {
    CHECK(error_of([] { parse_document(registry(), "seg | narration |\n"); }).kind() == ErrorKind::ParseError);
    CHECK(error_of([] { parse_document(registry(), "stage A\nsegment | narration\n"); }).kind() ==
          ErrorKind::ParseError);
    CHECK(error_of([] { parse_document(registry(), "paragraph one\n"); }).kind() == ErrorKind::ParseError);
    CHECK(error_of([] { parse_document(registry(), "declared_K zero\n"); }).kind() == ErrorKind::ParseError);
    CHECK(error_of([] { parse_document(registry(), "doc a\ndoc b\n"); }).kind() == ErrorKind::ParseError);
  }
  SUBCASE("declared width too small") {
    CHECK(error_of([] { parse_document(registry(), "declared_K 1\nstage A\nseg | narration, analogy |\n"); })
              .kind() == ErrorKind::BadCount);
  }
}

TEST_CASE("parse details") {
  const AnnotatedDocument doc = parse_document(registry(),
                                               "# comment\n"
                                               "doc sample\r\n"
                                               "stage Opening\n"
                                               "  seg | Narrative, narration, Cause and Effect | text | with bar\n"
                                               "@modes: analogy\n"
                                               "seg 10 | definition |\n");
  REQUIRE(doc.segments.size() == 3);
  CHECK(doc.segments[0].index == 1);
  CHECK(doc.segments[0].modes == std::vector<ModeId>{ModeId("narration"), ModeId("cause-effect")});
  CHECK(doc.segments[0].text == "text | with bar");
  CHECK(doc.segments[1].index == 2);
  CHECK(doc.segments[1].text.empty());
  CHECK(doc.segments[2].index == 10);
  CHECK_FALSE(doc.declared_width.has_value());
}

TEST_CASE("coverage examples") {
  const AnnotatedDocument three =
      parse_document(registry(), "stage A\nseg | narration, description, exemplification |\n");
  CHECK(analyze_coverage(three, 20u).coverage == doctest::Approx(0.15));
  CHECK(analyze_coverage(three, 3u).coverage == 1.0);
  CHECK(error_of([&] { analyze_coverage(three, 2u); }).kind() == ErrorKind::BadCount);
  CHECK(error_of([&] { analyze_coverage(three); }).kind() == ErrorKind::BadCount);

  std::string all = "declared_K 28\nstage A\nseg |";
  for (const auto& [id, mode] : registry().modes()) all += " " + id.str() + ",";
  all += " |\n";
  CHECK(analyze_coverage(parse_document(registry(), all)).coverage == 1.0);
}

TEST_CASE("used modes equal the brute-force union") {
  std::mt19937 rng(7);
  const std::vector<Mode> pool = registry().atoms();
  for (int trial = 0; trial < 200; ++trial) {
    const AnnotatedDocument doc = random_document(rng, pool);
    std::set<std::string> all;
    for (const Segment& s : doc.segments) {
      for (const ModeId& m : s.modes) all.insert(m.str());
    }
    CHECK(ids(doc.used_modes()) == all);
    CHECK(doc.used_modes().size() == all.size());
  }
}

TEST_CASE("annotation round trip") {
  const std::string lesson = support::read_file("data/lesson_memory.rma");
  const AnnotatedDocument doc = parse_document(registry(), lesson);
  const AnnotatedDocument again = parse_document(registry(), serialize_document(doc));
  CHECK(again == doc);

  std::mt19937 rng(3);
  const std::vector<Mode> pool = registry().atoms();
  for (int trial = 0; trial < 200; ++trial) {
    const AnnotatedDocument random = random_document(rng, pool);
    const AnnotatedDocument reparsed = parse_document(registry(), serialize_document(random));
    CHECK(reparsed == random);
    CHECK(serialize_document(reparsed) == serialize_document(random));
  }
}

TEST_CASE("segment equality ignores mode order and source line") {
  Segment a{1, "A", {ModeId("analogy"), ModeId("narration")}, "t", 4};
  Segment b{1, "A", {ModeId("narration"), ModeId("analogy")}, "t", 9};
  CHECK(a == b);
  b.text = "u";
  CHECK_FALSE(a == b);
}

TEST_CASE("introduction rate") {
  const auto doc = [](const std::string& modes) { return parse_document(registry(), "stage A\nseg | " + modes + " |\n"); };
  const std::vector<StagedDocument> corpus = {
      {0.0, doc("narration, description")},
      {6.0, doc("narration, description, exemplification, definition, classification")}};
  const RriReport r = estimate_rri(corpus);
  REQUIRE(r.intervals.size() == 1);
  CHECK(r.intervals[0].rate == doctest::Approx(0.5));
  CHECK(ids(r.intervals[0].introduced) == std::set<std::string>{"classification", "definition", "exemplification"});
  CHECK(r.cumulative == std::vector<std::pair<double, std::size_t>>{{0.0, 2}, {6.0, 5}});

  const std::vector<StagedDocument> same = {{0.0, doc("narration")}, {1.0, doc("narration")}};
  CHECK(estimate_rri(same).intervals[0].rate == 0.0);

  // A mode that drops out and returns is not new again.
  const std::vector<StagedDocument> gap = {{0, doc("narration")}, {1, doc("analogy")}, {2, doc("narration")}};
  CHECK(estimate_rri(gap).intervals[1].introduced.empty());

  CHECK(error_of([&] { estimate_rri(std::vector<StagedDocument>{corpus[0]}); }).kind() == ErrorKind::NotEnoughStages);
  const std::vector<StagedDocument> backwards = {corpus[1], corpus[0]};
  CHECK(error_of([&] { estimate_rri(backwards); }).kind() == ErrorKind::BadIndex);
}

TEST_CASE("introduction rates telescope") {
  std::mt19937 rng(5);
  const std::vector<Mode> pool = registry().atoms();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<StagedDocument> corpus;
    double stage = 0.0;
    const std::size_t count = 2 + rng() % 5;
    for (std::size_t i = 0; i < count; ++i) {
      AnnotatedDocument d = random_document(rng, pool);
      if (d.segments.empty()) d.segments.push_back({1, "S", {pool[rng() % pool.size()].id}, "", 0});
      corpus.push_back({stage, d});
      stage += 0.5 + (rng() % 4);
    }
    const RriReport r = estimate_rri(corpus);
    double total = 0.0;
    for (const RriInterval& i : r.intervals) total += i.rate * (i.to - i.from);
    const double k_first = static_cast<double>(r.cumulative.front().second);
    const double k_last = static_cast<double>(r.cumulative.back().second);
    CHECK(total == doctest::Approx(k_last - k_first));
  }
}

TEST_CASE("mismatch is empty exactly when observed fits expected") {
  const PyramidGraph graph = load_pyramid(registry(), "default");
  std::mt19937 rng(9);
  const std::vector<LayerNode> cs = graph.nodes(Layer::C);
  const std::vector<Mode> pool = registry().atoms();
  for (int trial = 0; trial < 200; ++trial) {
    const std::string c = cs[rng() % cs.size()].id;
    const auto realizing = realizers(graph, Layer::C, c);
    AnnotatedDocument doc;
    Segment seg{1, "S", {}, "", 0};
    for (const LayerNode& n : realizing) {
      if (rng() % 2 && registry().contains(ModeId(n.id))) seg.modes.emplace_back(n.id);
    }
    const bool add_outsider = rng() % 2;
    if (add_outsider) seg.modes.push_back(pool[rng() % pool.size()].id);
    if (seg.modes.empty()) seg.modes.emplace_back(realizing.front().id);
    doc.segments.push_back(seg);

    const std::vector<StageMapping> map = {{"S", {c}, ""}};
    const StageTrace s = trace_layers(doc, graph, map).stages.front();
    const auto observed = ids(s.observed);
    const auto expected = ids(s.expected);
    const bool subset = std::includes(expected.begin(), expected.end(), observed.begin(), observed.end());
    CHECK(s.mismatch.empty() == subset);
  }
}

TEST_CASE("default schedule and cone") {
  const StageSchedule schedule = default_schedule();
  REQUIRE(schedule.stages.size() == 6);
  CHECK(schedule.stages.front().name.rfind("KG", 0) == 0);
  CHECK(schedule.stages.back().name == "Graduate");
  CHECK(schedule.stages[1].rate == doctest::Approx(0.5));
  for (const ScheduleStage& s : schedule.stages) CHECK_FALSE(s.reference.empty());

  const auto rows = cone(schedule);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].width == 2);
  CHECK(rows[0].nonempty_combinations == 3);
  CHECK(rows[4].width == 16);
  CHECK(rows[4].nonempty_combinations == 65535);
  CHECK(rows[5].nonempty_combinations == 1048575);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].scale_bits == doctest::Approx(schedule.stages[i].rate));
    if (i) CHECK(rows[i].width >= rows[i - 1].width);
  }
  CHECK(cone(schedule, 2.0)[5].normalized_load == doctest::Approx(0.4));
}

TEST_CASE("schedule documents") {
  const StageSchedule s = load_schedule(R"({"stages":[{"name":"A","K":2,"duration":2},{"name":"B","K":6,"duration":4,
      "reference":"~1"},{"name":"C","K":6,"L_n":0.25}]})");
  REQUIRE(s.stages.size() == 3);
  CHECK(s.stages[0].rate == doctest::Approx(1.0));
  CHECK(s.stages[1].rate == doctest::Approx(1.0));
  CHECK(s.stages[1].reference == "~1");
  CHECK(s.stages[2].rate == 0.25);

  CHECK(error_of([] { load_schedule(support::read_file("data/schedule-decreasing.json")); }).kind() ==
        ErrorKind::BadSchedule);
  CHECK(error_of([] { load_schedule(R"({"stages":[{"name":"A","K":0}]})"); }).kind() == ErrorKind::OutOfRange);
  CHECK(error_of([] { load_schedule(R"({"stages":[{"name":"A","K":121}]})"); }).kind() == ErrorKind::OutOfRange);
  CHECK(error_of([] { load_schedule(R"({"stages":[{"name":"A","K":3,"L_n":-1}]})"); }).kind() ==
        ErrorKind::BadSchedule);
  CHECK(error_of([] { load_schedule(R"({"stages":[{"name":"A","K":3,"duration":0}]})"); }).kind() ==
        ErrorKind::BadSchedule);
  CHECK(error_of([] { load_schedule(R"({"stages":[]})"); }).kind() == ErrorKind::BadSchedule);
  CHECK(error_of([] { load_schedule("nope"); }).kind() == ErrorKind::ParseError);
}
