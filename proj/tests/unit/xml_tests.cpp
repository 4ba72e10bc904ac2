#include <doctest.h>

#include <random>

#include "../support/generators.hpp"
#include "../support/helpers.hpp"
#include "xfd/efp/efp.hpp"
#include "xfd/semantics.hpp"
#include "xfd/xml/devs_xml.hpp"

using namespace xfd;
using namespace xfd::devs_xml;
using testsupport::fixture;
using testsupport::slurp;

TEST_CASE("dom: basic parsing, entities and serialization") {
  const auto doc = xml::parse(
      "<?xml version=\"1.0\"?><a x=\"1\"><!-- note --><b>hi &amp; bye</b>"
      "<c y=\"q&quot;w\"/><![CDATA[]]></a>");
  CHECK(doc.name == "a");
  CHECK(*doc.attr("x") == "1");
  REQUIRE(doc.children.size() == 2);
  CHECK(doc.children[0].trimmed_text() == "hi & bye");
  CHECK(*doc.children[1].attr("y") == "q\"w");

  const std::string round = xml::serialize(doc);
  CHECK(xml::equal(xml::parse(round), doc));
}

TEST_CASE("dom: malformed input is rejected with a location") {
  CHECK_THROWS_AS(xml::parse("<a><b></a>"), xml::ParseError);
  CHECK_THROWS_AS(xml::parse("<a attr=oops/>"), xml::ParseError);
  CHECK_THROWS_AS(xml::parse("<a>&nope;</a>"), xml::ParseError);
  CHECK_THROWS_AS(xml::parse("no xml at all"), xml::ParseError);
  try {
    xml::parse("<a>\n<b></c></a>", "f.xml");
    FAIL("should have thrown");
  } catch (const xml::ParseError& e) {
    CHECK(std::string(e.what()).find("f.xml") != std::string::npos);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("the published variant generator parses faithfully") {
  Dialect dialect;
  const AtomicSpec spec =
      parse_atomic_xml(xml::parse(slurp(fixture("variant/Generator.xml"))), &dialect);
  CHECK(dialect == Dialect::AtomicVariant);
  CHECK(spec.states == std::vector<StateName>{"passive", "active"});
  CHECK(spec.initial == "passive");  // first listed
  CHECK(time_advance(spec, "active") == TimeValue(10.0));
  CHECK(spec.delt_int == std::vector<InternalTransition>{{"active", "active", 2}});
  REQUIRE(spec.delt_ext.size() == 1);
  CHECK(spec.delt_ext[0] == ExternalTransition{"active", "Job", "passive", true, 2});
  CHECK(spec.host == "localhost");
}

TEST_CASE("a minimal atomic document defaults every table to empty") {
  const auto doc = xml::parse(
      "<Atomic modelName=\"Min\" host=\"localhost\"><inports/>"
      "<states><state>s0</state></states><outports/>"
      "<deltint/><deltext/><lamdas/></Atomic>");
  const AtomicSpec spec = parse_atomic_xml(doc);
  CHECK(spec.states == std::vector<StateName>{"s0"});
  CHECK(time_advance(spec, "s0").is_infinite());
  CHECK(spec.lambda.empty());
}

TEST_CASE("documents that would break determinism are rejected at parse") {
  try {
    parse_atomic_xml(xml::parse(slurp(fixture("broken/b04_DuplicateExternalTransition.xml"))));
    FAIL("should have thrown");
  } catch (const xml::ParseError& e) {
    CHECK(has_code(e.violations, codes::DuplicateExternalTransition));
  }
}

TEST_CASE("mixed dialect spellings are a dialect mismatch") {
  CHECK_THROWS_WITH_AS(
      parse_atomic_xml(xml::parse(slurp(fixture("broken/b10_DialectMismatch.xml")))),
      doctest::Contains("dialect-mismatch"), xml::ParseError);
}

TEST_CASE("the published variant EF parses faithfully") {
  Dialect dialect;
  const CoupledSpec spec =
      parse_coupled_xml(xml::parse(slurp(fixture("variant/EF.xml"))), &dialect);
  CHECK(dialect == Dialect::CoupledVariant);
  REQUIRE(spec.models.size() == 2);
  CHECK(spec.models[0].child == "Generator");
  CHECK(spec.models[1].child == "Transducer");
  CHECK(spec.couplings == std::vector<Coupling>{{"Generator", "Transducer", "out", "arrived"}});
  CHECK(spec.name.empty());
}

TEST_CASE("a coupling-free digraph parses but draws a strict warning") {
  const auto doc = xml::parse(
      "<Digraph name=\"Solo\" host=\"h\"><Couplings/><Models><Model>Only</Model></Models>"
      "<Inports/><Outports/></Digraph>");
  const CoupledSpec spec = parse_coupled_xml(doc);
  CHECK(spec.models.size() == 1);
  CHECK(spec.couplings.empty());

  const auto vs = validate_document(doc, DocKind::Coupled);
  CHECK(has_code(vs, codes::EmptyCouplings));
  CHECK_FALSE(has_errors(vs));
}

TEST_CASE("strict efp fixtures parse into the build_efp registry") {
  const auto built = efp::build_efp({});
  const auto loaded = load_model_tree(fixture("efp/EFP.xml"), fixture("efp"));
  CHECK(loaded.root == "EFP");
  CHECK(loaded.registry == built);
}

TEST_CASE("emission is strict, deterministic and round-trips") {
  const auto built = efp::build_efp({});
  for (const auto& name : built.names()) {
    if (const AtomicSpec* a = built.find_atomic(name)) {
      const xml::Node doc = emit_atomic_xml(*a);
      CHECK(parse_atomic_xml(doc) == *a);
      const auto vs = validate_document(doc, DocKind::Atomic);
      CHECK(vs.empty());
    } else {
      const CoupledSpec* c = built.find_coupled(name);
      const xml::Node doc = emit_coupled_xml(*c);
      CHECK(parse_coupled_xml(doc) == *c);
      CHECK_FALSE(has_errors(validate_document(doc, DocKind::Coupled)));
    }
  }

  const std::string gen = emit_atomic_string(*built.find_atomic("Generator"));
  CHECK(gen.find("<timeout>10.0</timeout>") != std::string::npos);
  CHECK(gen.find("<delttext>") != std::string::npos);  // the published spelling
  CHECK(gen.find("<state>active</state>") != std::string::npos);
}

TEST_CASE("an all-passive atomic emits an empty timeAdvance and warns") {
  AtomicSpec spec;
  spec.name = "Sleepy";
  spec.states = {"idle"};
  spec.initial = "idle";
  const xml::Node doc = emit_atomic_xml(spec);
  const auto vs = validate_document(doc, DocKind::Atomic);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].code == codes::EmptyTimeAdvance);
  CHECK_FALSE(vs[0].is_error());
  CHECK(parse_atomic_xml(doc) == spec);
}

TEST_CASE("emitters write the initial state first") {
  AtomicSpec spec;
  spec.name = "Reordered";
  spec.states = {"passive", "active"};
  spec.initial = "active";
  spec.ta = {{"active", TimeValue(1.0)}};
  spec.delt_int = {{"active", "passive", 1}};
  const AtomicSpec back = parse_atomic_xml(emit_atomic_xml(spec));
  CHECK(back.states == std::vector<StateName>{"active", "passive"});
  CHECK(back.initial == "active");
}

TEST_CASE("empty port sections still appear as wrapper elements") {
  const auto built = efp::build_efp({});
  const std::string efp_doc = emit_coupled_string(*built.find_coupled("EFP"));
  CHECK(efp_doc.find("<Inports/>") != std::string::npos);
  CHECK(efp_doc.find("<Outports/>") != std::string::npos);
}

TEST_CASE("validate_document: required attributes and ordering") {
  const auto no_name = xml::parse(slurp(fixture("broken/b01_MissingAttribute.xml")));
  CHECK(has_code(validate_document(no_name, DocKind::Atomic), codes::MissingAttribute));

  const auto order = xml::parse(slurp(fixture("broken/b09_ElementOrder.xml")));
  CHECK(has_code(validate_document(order, DocKind::Atomic), codes::ElementOrder));

  // Digraph name/host are optional: absence warns, never errors.
  const auto coupled = xml::parse(
      "<Digraph><Couplings><coupling><src>a</src><dest>b</dest><outport>o</outport>"
      "<inport>i</inport></coupling></Couplings><Models><Model>a</Model><Model>b</Model>"
      "</Models><Inports/><Outports/></Digraph>");
  const auto vs = validate_document(coupled, DocKind::Coupled);
  CHECK_FALSE(has_errors(vs));
  CHECK(has_code(vs, codes::MissingAttribute));

  const auto wrong_kind = validate_document(coupled, DocKind::Atomic);
  CHECK(has_code(wrong_kind, codes::KindMismatch));
}

TEST_CASE("load_model_tree reports missing files and cycles") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "xfd_loader_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "Root.xml")
        << "<Digraph name=\"Root\"><Couplings/><Models><Model>Ghost</Model></Models>"
           "<Inports/><Outports/></Digraph>";
  }
  CHECK_THROWS_WITH_AS(load_model_tree(dir / "Root.xml", dir),
                       doctest::Contains("Ghost.xml"), Error);

  {
    std::ofstream(dir / "CycA.xml")
        << "<Digraph name=\"CycA\"><Couplings/><Models><Model>CycB</Model></Models>"
           "<Inports/><Outports/></Digraph>";
    std::ofstream(dir / "CycB.xml")
        << "<Digraph name=\"CycB\"><Couplings/><Models><Model>CycA</Model></Models>"
           "<Inports/><Outports/></Digraph>";
  }
  CHECK_THROWS_WITH_AS(load_model_tree(dir / "CycA.xml", dir),
                       doctest::Contains("cycle-detected"), Error);

  {
    std::ofstream(dir / "Liar.xml")
        << "<Atomic modelName=\"NotLiar\" host=\"h\"><inports/>"
           "<states><state>s</state></states><outports/><deltint/><delttext/>"
           "<timeAdvance/><lamdas/></Atomic>";
  }
  CHECK_THROWS_WITH_AS(load_model_tree(dir / "Liar.xml", dir),
                       doctest::Contains("name-mismatch"), Error);
  fs::remove_all(dir);
}

TEST_CASE("round-trip property over random atomic and coupled specs") {
  std::mt19937 rng(42);
  for (int i = 0; i < 100; ++i) {
    const AtomicSpec spec = testgen::random_atomic(rng);
    REQUIRE(validate_atomic(spec).empty());
    CHECK(parse_atomic_xml(emit_atomic_xml(spec)) == spec);
  }
  for (int i = 0; i < 100; ++i) {
    const CoupledSpec spec = testgen::random_coupled(rng);
    REQUIRE_FALSE(has_errors(validate_coupled(spec)));
    CHECK(parse_coupled_xml(emit_coupled_xml(spec)) == spec);
  }
}

TEST_CASE("variant documents re-emit strictly and parse back unchanged") {
  for (const char* name : {"variant/Generator.xml", "variant/EF.xml"}) {
    const auto doc = xml::parse(slurp(fixture(name)));
    if (doc.local_name() == "Atomic") {
      const AtomicSpec v = parse_atomic_xml(doc);
      CHECK(parse_atomic_xml(emit_atomic_xml(v)) == v);
    } else {
      const CoupledSpec v = parse_coupled_xml(doc);
      CHECK(parse_coupled_xml(emit_coupled_xml(v)) == v);
    }
  }
}
