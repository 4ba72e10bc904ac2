#include <doctest.h>

#include <algorithm>
#include <random>

#include "../support/generators.hpp"
#include "../support/helpers.hpp"
#include "xfd/efp/efp.hpp"
#include "xfd/error.hpp"
#include "xfd/semantics.hpp"
#include "xfd/xml/devs_xml.hpp"

using namespace xfd;
using testsupport::fixture;
using testsupport::make_m1;
using testsupport::slurp;

namespace {

AtomicSpec published_generator() {
  return devs_xml::parse_atomic_xml(xml::parse(slurp(fixture("variant/Generator.xml"))));
}

AtomicSpec efp_generator() {
  auto reg = efp::build_efp({});
  return *reg.find_atomic("Generator");
}

}  // namespace

TEST_CASE("time_advance reads the ta table and defaults to infinity") {
  const AtomicSpec gen = efp_generator();
  CHECK(time_advance(gen, "active") == TimeValue(10.0));
  CHECK(time_advance(gen, "passive").is_infinite());
  CHECK(time_advance(make_m1(), "active") == TimeValue(5.0));
  CHECK_THROWS_WITH_AS(time_advance(gen, "bogus"), doctest::Contains("unknown-state"),
                       Error);
}

TEST_CASE("output collects lambda entries, defaulting labels to port names") {
  const AtomicSpec gen = efp_generator();
  CHECK(output(gen, "active") == Bag{{"out", "Job"}});
  CHECK(output(gen, "passive") == Bag{});
  CHECK(output(make_m1(), "active") == Bag{{"out", "M1OutputMessage"}});

  // Without an explicit label the port name doubles as the label.
  const AtomicSpec published = published_generator();
  CHECK(output(published, "active") == Bag{{"out", "out"}});
}

TEST_CASE("delta_int follows the unique internal transition") {
  const AtomicSpec gen = efp_generator();
  CHECK(delta_int(gen, "active") == "active");
  CHECK(delta_int(make_m1(), "active") == "passive");
  auto reg = efp::build_efp({});
  CHECK(delta_int(*reg.find_atomic("Processor"), "busy") == "idle");
  CHECK_THROWS_WITH_AS(delta_int(gen, "passive"),
                       doctest::Contains("no-internal-transition"), Error);
  CHECK_THROWS_WITH_AS(delta_int(gen, "nope"), doctest::Contains("unknown-state"), Error);
}

TEST_CASE("delta_ext matches entries and absorbs everything else") {
  const AtomicSpec published = published_generator();
  CHECK(delta_ext(published, "active", "Job") == std::pair<StateName, bool>{"passive", true});
  CHECK(delta_ext(make_m1(), "passive", "M1InputMessage") ==
        std::pair<StateName, bool>{"passive", false});
  CHECK(delta_ext(published, "passive", "UnknownMsg") ==
        std::pair<StateName, bool>{"passive", false});
}

TEST_CASE("delta_con is internal-first") {
  const AtomicSpec published = published_generator();
  CHECK(delta_con(published, "active", Bag{}) == "active");
  CHECK(delta_con(published, "active", Bag{{"stop", "Job"}}) == "passive");

  // M1's composition: internal to passive, then the message is absorbed.
  CHECK(delta_con(make_m1(), "active", Bag{{"in", "M1InputMessage"}}) == "passive");
}

TEST_CASE("apply_bag folds in canonical order and ORs the schedule flags") {
  const AtomicSpec published = published_generator();
  CHECK(apply_bag(published, "active", Bag{}) ==
        std::pair<StateName, bool>{"active", false});
  CHECK(apply_bag(published, "active", Bag{{"stop", "Job"}}) ==
        std::pair<StateName, bool>{"passive", true});
  // The second Job lands in passive, where it is absorbed.
  CHECK(apply_bag(published, "active", Bag{{"stop", "Job"}, {"stop", "Job"}}) ==
        std::pair<StateName, bool>{"passive", true});
}

TEST_CASE("apply_bag is insensitive to the bag's insertion order") {
  AtomicSpec spec;
  spec.name = "Chain";
  spec.inports = {"a", "b"};
  spec.outports = {"out"};
  spec.states = {"s0", "s1", "s2", "s3", "s4"};
  spec.initial = "s0";
  spec.delt_ext = {
      {"s0", "A", "s1", false, 1}, {"s0", "B", "s2", false, 2},
      {"s1", "B", "s3", true, 3},  {"s2", "A", "s4", true, 4},
  };
  REQUIRE(validate_atomic(spec).empty());

  Bag fwd{{"a", "A"}, {"b", "B"}};
  Bag rev{{"b", "B"}, {"a", "A"}};
  CHECK(apply_bag(spec, "s0", fwd) == apply_bag(spec, "s0", rev));
  // Canonical order sorts (a, A) before (b, B): s0 -A-> s1 -B-> s3.
  CHECK(apply_bag(spec, "s0", fwd).first == "s3");

  const Bag full{{"a", "A"}, {"b", "B"}, {"a", "B"}, {"b", "A"}};
  const auto expected = apply_bag(spec, "s0", full);
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::vector<Message> msgs = full.items();
    std::shuffle(msgs.begin(), msgs.end(), rng);
    Bag bag;
    for (const auto& m : msgs) bag.add(m);
    CHECK(apply_bag(spec, "s0", bag) == expected);
  }
}

TEST_CASE("validate_atomic accepts the published generator") {
  CHECK(validate_atomic(published_generator()).empty());
  CHECK(validate_atomic(efp_generator()).empty());
}

TEST_CASE("validate_atomic flags determinism and completeness breaks") {
  AtomicSpec spec = efp_generator();
  spec.delt_int.push_back({"active", "passive", 9});
  CHECK(has_code(validate_atomic(spec), codes::DuplicateInternalTransition));

  AtomicSpec missing;
  missing.name = "W";
  missing.states = {"waiting"};
  missing.initial = "waiting";
  missing.ta = {{"waiting", TimeValue(3.0)}};
  CHECK(has_code(validate_atomic(missing), codes::MissingInternalTransition));

  AtomicSpec dup_ext = efp_generator();
  dup_ext.delt_ext.push_back({"active", "Stop", "active", true, 9});
  CHECK(has_code(validate_atomic(dup_ext), codes::DuplicateExternalTransition));

  AtomicSpec bad_ref = efp_generator();
  bad_ref.ta.push_back({"ghost", TimeValue(1.0)});
  CHECK(has_code(validate_atomic(bad_ref), codes::UnknownState));

  AtomicSpec bad_port = efp_generator();
  bad_port.lambda.push_back({"active", "nowhere", std::nullopt});
  CHECK(has_code(validate_atomic(bad_port), codes::UnknownPort));

  AtomicSpec bad_initial = efp_generator();
  bad_initial.initial = "ghost";
  CHECK(has_code(validate_atomic(bad_initial), codes::UnknownInitialState));
}

TEST_CASE("validate_coupled classifies and rejects per the partition rule") {
  auto reg = efp::build_efp({});
  const CoupledSpec ef = *reg.find_coupled("EF");
  CHECK(validate_coupled(ef, reg).empty());

  // The published one-coupling EF, checked against resolvable children.
  CoupledSpec published =
      devs_xml::parse_coupled_xml(xml::parse(slurp(fixture("variant/EF.xml"))));
  published.name = "EF";
  ModelRegistry mini;
  mini.add(*reg.find_atomic("Generator"));
  mini.add(*reg.find_atomic("Transducer"));
  CHECK(validate_coupled(published, mini).empty());

  CoupledSpec typo = ef;
  typo.couplings.push_back({"Generator", "Procesor", "out", "in"});
  CHECK(has_code(validate_coupled(typo), codes::UnknownModel));

  CoupledSpec self = ef;
  self.couplings.push_back({"Generator", "Generator", "out", "stop"});
  CHECK(has_code(validate_coupled(self), codes::SelfCoupling));

  CoupledSpec dangling = ef;
  dangling.couplings.push_back({"Generator", "Transducer", "out", "no_such_port"});
  CHECK(has_code(validate_coupled(dangling, reg), codes::UnknownPort));
}

TEST_CASE("validation accepts a spec iff its tables are partial functions") {
  std::mt19937 rng(99);
  for (int i = 0; i < 50; ++i) {
    AtomicSpec spec = testgen::random_atomic(rng);
    CHECK(validate_atomic(spec).empty());

    AtomicSpec broken = spec;
    if (!broken.delt_ext.empty()) {
      broken.delt_ext.push_back(broken.delt_ext.front());
      CHECK(has_code(validate_atomic(broken), codes::DuplicateExternalTransition));
    }
    if (!spec.delt_int.empty()) {
      AtomicSpec dup_int = spec;
      dup_int.delt_int.push_back(dup_int.delt_int.front());
      CHECK(has_code(validate_atomic(dup_int), codes::DuplicateInternalTransition));
    }
  }
}

TEST_CASE("coupling classification is a partition") {
  auto reg = efp::build_efp({});
  const CoupledSpec ef = *reg.find_coupled("EF");
  int eic = 0, eoc = 0, ic = 0;
  for (const auto& c : ef.couplings) {
    switch (ef.classify(c)) {
      case CouplingKind::EIC: ++eic; break;
      case CouplingKind::EOC: ++eoc; break;
      case CouplingKind::IC: ++ic; break;
      case CouplingKind::Invalid: FAIL("valid coupling classified Invalid");
    }
  }
  CHECK(eic == 1);
  CHECK(eoc == 1);
  CHECK(ic == 2);
}
