// Acceptance suite: every criterion prints one PASS/FAIL line and the
// process exits with the number of failures.

#include <chrono>
#include <iostream>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "cts/cli.hpp"
#include "cts/io.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace cts;
using cts::testing::Rng;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int index, const std::string& name, bool pass,
            const std::string& note) {
  std::cout << (pass ? "PASS" : "FAIL") << "  " << index << ". " << name
            << " (" << note << ")\n";
  if (!pass) ++failures;
}

// 1. validate_cps agrees with the exhaustive all-subsets oracle on 200
//    candidates, half mutated, in under 5 seconds.
void criterion_1() {
  auto start = Clock::now();
  Rng rng(10001);
  int mismatches = 0, invalid_seen = 0;
  for (int i = 0; i < 200; ++i) {
    FiniteSpace space = cts::testing::letter_space(rng, "p", 6);
    ConditioningFamily family =
        cts::testing::random_family(rng, space.size(), 4);
    Cps cps = cts::testing::random_valid_cps(rng, space, family, 2);
    if (i % 2 == 0) cts::testing::mutate_candidate(rng, cps);
    bool fast = validate_cps(cps).ok();
    bool slow = cts::testing::oracle_is_valid_cps(cps);
    if (fast != slow) ++mismatches;
    if (!slow) ++invalid_seen;
  }
  double elapsed = seconds_since(start);
  std::ostringstream note;
  note << "200 candidates, " << invalid_seen << " invalid, " << mismatches
       << " verdict mismatches, " << elapsed << "s";
  report(1, "chain-rule verdicts match the exhaustive oracle",
         mismatches == 0 && invalid_seen > 0 && elapsed < 5.0, note.str());
}

std::vector<TypeStructure> corpus() {
  static std::vector<TypeStructure> cached;
  if (cached.empty()) {
    Rng rng(10002);
    for (int i = 0; i < 100; ++i)
      cached.push_back(cts::testing::random_structure(rng, 4, 4, 3));
  }
  return cached;
}

// 2. Depth-5 unfoldings of 100 random structures are coherent and truncate
//    consistently, in under 30 seconds.
void criterion_2() {
  auto start = Clock::now();
  int bad_coherence = 0, bad_truncation = 0;
  for (const TypeStructure& ts : corpus()) {
    auto deep = unfold(ts, 5);
    for (Player i = 0; i < 2; ++i)
      for (const PrefixPtr& p : deep[i])
        if (!check_prefix_coherence(p).ok()) ++bad_coherence;
    for (int m = 1; m <= 5; ++m) {
      auto shallow = unfold(ts, m);
      for (Player i = 0; i < 2; ++i)
        for (int t = 0; t < ts.side[i].types.size(); ++t)
          if (!prefix_equal(truncate(deep[i][t], m), shallow[i][t]))
            ++bad_truncation;
    }
  }
  double elapsed = seconds_since(start);
  std::ostringstream note;
  note << "100 structures to depth 5, " << bad_coherence
       << " coherence failures, " << bad_truncation
       << " truncation mismatches, " << elapsed << "s";
  report(2, "unfoldings are coherent and truncation-consistent",
         bad_coherence == 0 && bad_truncation == 0 && elapsed < 30.0,
         note.str());
}

// 3. Refinement blocks equal exact prefix equality up to fixpoint+2 and the
//    fixpoint index respects the |T1|+|T2| bound.
void criterion_3() {
  auto start = Clock::now();
  int mismatches = 0, bound_breaks = 0;
  for (const TypeStructure& ts : corpus()) {
    RefineResult r = refine(ts);
    if (r.fixpoint_index > ts.side[0].types.size() + ts.side[1].types.size())
      ++bound_breaks;
    auto rounds = refine_rounds(ts, r.fixpoint_index + 2);
    for (int n = 1; n <= r.fixpoint_index + 2; ++n) {
      auto prefixes = unfold(ts, n);
      for (Player i = 0; i < 2; ++i)
        for (int t = 0; t < ts.side[i].types.size(); ++t)
          for (int u = t + 1; u < ts.side[i].types.size(); ++u) {
            bool same_block =
                rounds[n][i].block_of[t] == rounds[n][i].block_of[u];
            if (same_block != prefix_equal(prefixes[i][t], prefixes[i][u]))
              ++mismatches;
          }
    }
  }
  std::ostringstream note;
  note << "100 structures, " << mismatches << " block/prefix mismatches, "
       << bound_breaks << " bound violations, " << seconds_since(start)
       << "s";
  report(3, "refinement equals hierarchy equality, fixpoint within bound",
         mismatches == 0 && bound_breaks == 0, note.str());
}

// 4. Fifty quotient maps verify as type and hierarchy morphisms; fifty
//    mutated maps fail with a located witness.
void criterion_4() {
  auto start = Clock::now();
  Rng rng(10004);
  int good = 0, good_failures = 0, mutated = 0, undetected = 0;
  while (good < 50 || mutated < 50) {
    TypeStructure ts = cts::testing::random_structure(rng, 3, 4, 2);
    cts::testing::Quotient q = cts::testing::quotient_structure(ts);
    if (good < 50) {
      ++good;
      if (!check_type_morphism(ts, q.ts, q.map).ok ||
          !check_hierarchy_morphism(ts, q.ts, q.map, std::nullopt).ok)
        ++good_failures;
    }
    if (mutated < 50) {
      // Redirect one type to a block with a different belief signature.
      Player pl = q.ts.side[0].types.size() > 1 ? 0
                  : q.ts.side[1].types.size() > 1
                      ? 1
                      : -1;
      if (pl < 0) continue;
      ++mutated;
      TypeMap broken = q.map;
      int victim = 0;
      int old_block = broken[pl][victim];
      broken[pl][victim] =
          (old_block + 1) % q.ts.side[pl].types.size();
      TypeMorphismReport r = check_type_morphism(ts, q.ts, broken);
      if (r.ok || !r.witness) ++undetected;
    }
  }
  std::ostringstream note;
  note << good << " quotient maps, " << good_failures << " false rejections; "
       << mutated << " mutated maps, " << undetected
       << " undetected breaks, " << seconds_since(start) << "s";
  report(4, "morphism checks accept quotients and locate mutations",
         good_failures == 0 && undetected == 0, note.str());
}

// 5. Coherent extension truncates back to its input and iterates coherently.
void criterion_5() {
  auto start = Clock::now();
  Rng rng(10005);
  int round_trip_failures = 0, triple_failures = 0, tested = 0;
  while (tested < 100) {
    TypeStructure ts = cts::testing::random_structure(rng, 3, 3, 2);
    HierarchyContext ctx = context_of(ts);
    int order = cts::testing::pick(rng, 1, 4);
    auto prefixes = unfold(ts, order);
    for (Player i = 0; i < 2 && tested < 100; ++i)
      for (int t = 0; t < ts.side[i].types.size() && tested < 100; ++t) {
        ++tested;
        PrefixPtr p = prefixes[i][t];
        PrefixPtr once = coherent_extend(p, ctx, i);
        if (!prefix_equal(truncate(once, p->order()), p))
          ++round_trip_failures;
        PrefixPtr thrice =
            coherent_extend(coherent_extend(once, ctx, i), ctx, i);
        if (thrice->order() != p->order() + 3 ||
            !check_prefix_coherence(thrice).ok())
          ++triple_failures;
      }
  }
  std::ostringstream note;
  note << tested << " coherent prefixes, " << round_trip_failures
       << " round-trip failures, " << triple_failures
       << " triple-extension failures, " << seconds_since(start) << "s";
  report(5, "coherent extension round-trips and iterates",
         round_trip_failures == 0 && triple_failures == 0, note.str());
}

// 6. Lifting through a surjection pushes back onto the input exactly.
void criterion_6() {
  auto start = Clock::now();
  Rng rng(10006);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    FiniteSpace x = cts::testing::letter_space(rng, "x", 3);
    FiniteSpace z = cts::testing::letter_space(rng, "z", 3);
    int yn = cts::testing::pick(rng, z.size(), 4);
    std::vector<std::string> labels;
    for (int k = 0; k < yn; ++k) labels.push_back("y" + std::to_string(k + 1));
    FiniteSpace y = make_space(std::move(labels));
    ConditioningFamily bx = cts::testing::random_family(rng, x.size(), 3);
    Cps nu = cts::testing::random_valid_cps(rng, product_space(x, z),
                                            cylinder_family(bx, z.size()));
    std::vector<int> f1 = cts::testing::random_surjection(rng, yn, z.size());
    Cps lifted = lift_cps(nu, x, z, f1, y);
    std::vector<int> forward(product_space(x, y).size());
    for (int p = 0; p < static_cast<int>(forward.size()); ++p)
      forward[p] = pair_index(pair_left(p, y.size()),
                              f1[pair_right(p, y.size())], z.size());
    if (pushforward_cps(lifted, forward, nu.space, nu.family) != nu)
      ++mismatches;
  }
  std::ostringstream note;
  note << "100 lifts, " << mismatches << " round-trip failures, "
       << seconds_since(start) << "s";
  report(6, "lifts push back onto their input exactly", mismatches == 0,
         note.str());
}

// 7. The Friedenberg fixture end to end: redundant with the named witness,
//    incomplete with the even-mixture witness, and mutually included with
//    the one-type structure at fixpoint.
void criterion_7() {
  auto start = Clock::now();
  bool ok = true;
  std::ostringstream why;

  TypeStructure fried = cts::testing::load_fixture("friedenberg.json");
  TypeStructure tiny = cts::testing::load_fixture("one_type.json");

  RedundancyReport red = is_non_redundant(fried);
  if (red.non_redundant || !red.witness || (*red.witness)[0] != 0 ||
      fried.side[0].types.label((*red.witness)[1]) != "t'_a" ||
      fried.side[0].types.label((*red.witness)[2]) != "t''_a") {
    ok = false;
    why << "redundancy witness wrong; ";
  }

  CompletenessReport comp = completeness_report(fried);
  if (comp.complete() || !comp.side[1].witness ||
      !validate_cps(*comp.side[1].witness).ok() ||
      comp.side[1].witness->conditionals[0].mass !=
          std::vector<Rational>{Rational(1, 2), Rational(1, 2)}) {
    ok = false;
    why << "completeness witness wrong; ";
  } else {
    for (const Cps& belief : fried.side[1].beliefs)
      if (belief == *comp.side[1].witness) {
        ok = false;
        why << "witness inside the image; ";
      }
  }

  InclusionReport ab = hierarchies_included(fried, tiny, std::nullopt);
  InclusionReport ba = hierarchies_included(tiny, fried, std::nullopt);
  if (!ab.included || !ba.included || !ab.unique_hierarchy_class) {
    ok = false;
    why << "mutual inclusion failed; ";
  }

  // The CLI agrees on exit codes.
  std::string dir(CTS_FIXTURE_DIR);
  std::ostringstream sink, errs;
  if (io::run_command({"validate", dir + "/friedenberg.json"}, sink, errs) !=
          0 ||
      io::run_command({"redundancy", dir + "/friedenberg.json"}, sink, errs) !=
          1 ||
      io::run_command({"compare", dir + "/friedenberg.json",
                       dir + "/one_type.json", "--fixpoint"},
                      sink, errs) != 0 ||
      io::run_command({"compare", dir + "/one_type.json",
                       dir + "/friedenberg.json", "--fixpoint"},
                      sink, errs) != 0) {
    ok = false;
    why << "CLI exit codes wrong; ";
  }

  why << seconds_since(start) << "s";
  report(7, "Friedenberg example end to end", ok, why.str());
}

// 8. conditional_of_measure always validates; completeness witnesses always
//    validate and sit outside the belief image.
void criterion_8() {
  auto start = Clock::now();
  Rng rng(10008);
  int invalid_conditionals = 0;
  for (int i = 0; i < 100; ++i) {
    FiniteSpace space = cts::testing::letter_space(rng, "p", 5);
    ConditioningFamily family =
        cts::testing::random_family(rng, space.size(), 4);
    Measure p = cts::testing::random_full_support(rng, space.size(), 9);
    Cps cps = conditional_of_measure(space, p, family);
    if (!validate_cps(cps).ok() || !cts::testing::oracle_is_valid_cps(cps))
      ++invalid_conditionals;
  }

  int bad_witnesses = 0, witnesses = 0;
  for (int i = 0; i < 40; ++i) {
    TypeStructure ts = cts::testing::random_structure(rng, 3, 3, 2);
    CompletenessReport report = completeness_report(ts);
    for (Player pl = 0; pl < 2; ++pl) {
      if (!report.side[pl].witness) continue;
      ++witnesses;
      const Cps& w = *report.side[pl].witness;
      bool fine = validate_cps(w).ok();
      for (const Cps& belief : ts.side[pl].beliefs)
        fine = fine && belief != w;
      if (!fine) ++bad_witnesses;
    }
  }
  std::ostringstream note;
  note << "100 conditionals, " << invalid_conditionals << " invalid; "
       << witnesses << " witnesses, " << bad_witnesses << " bad, "
       << seconds_since(start) << "s";
  report(8, "conditionals validate and completeness witnesses are fresh",
         invalid_conditionals == 0 && bad_witnesses == 0 && witnesses > 0,
         note.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures;
}
