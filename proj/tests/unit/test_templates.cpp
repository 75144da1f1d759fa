#include <doctest.h>

#include "speclint/errors.hpp"
#include "speclint/monitor.hpp"
#include "speclint/parser.hpp"
#include "speclint/templates.hpp"

using namespace speclint;

TEST_CASE("settling instantiates to a bounded always") {
  TemplateInstance t{"settling",
                     "x",
                     {{"ref", Rational(1)},
                      {"r", Rational(1, 10)},
                      {"ts", Rational(20)},
                      {"H", Rational(40)}}};
  Formula f = instantiate(t);
  CHECK(f == parse_formula("G[20,40]((x > 0.9) /\\ (x < 1.1))"));
  CHECK(fragment_class(f) == FragmentClass::BoxDiamond);
}

TEST_CASE("overshoot instantiates to a bounded always") {
  TemplateInstance t{
      "overshoot",
      "x",
      {{"ref", Rational(1)}, {"m", Rational(1, 5)}, {"H", Rational(40)}}};
  Formula f = instantiate(t);
  CHECK(f == parse_formula("G[0,40](x < 1.2)"));
}

TEST_CASE("parameter bounds are enforced") {
  TemplateInstance zero_r{"settling",
                          "x",
                          {{"ref", Rational(1)},
                           {"r", Rational(0)},
                           {"ts", Rational(20)},
                           {"H", Rational(40)}}};
  CHECK_THROWS_AS(instantiate(zero_r), Error);

  TemplateInstance bad_window{"settling",
                              "x",
                              {{"ref", Rational(1)},
                               {"r", Rational(1, 10)},
                               {"ts", Rational(40)},
                               {"H", Rational(40)}}};
  CHECK_THROWS_AS(instantiate(bad_window), Error);

  TemplateInstance neg_ref{
      "overshoot",
      "x",
      {{"ref", Rational(-1)}, {"m", Rational(1, 5)}, {"H", Rational(40)}}};
  CHECK_THROWS_AS(instantiate(neg_ref), Error);

  TemplateInstance unknown{"overshoot",
                           "x",
                           {{"ref", Rational(1)},
                            {"m", Rational(1, 5)},
                            {"H", Rational(40)},
                            {"bogus", Rational(1)}}};
  CHECK_THROWS_AS(instantiate(unknown), Error);
}

TEST_CASE("catalog lists exactly the two templates") {
  const auto &catalog = list_templates();
  REQUIRE(catalog.size() == 2);
  CHECK(catalog[0].id == "settling");
  CHECK(catalog[1].id == "overshoot");
  CHECK(catalog[0].parameters.size() == 5); // channel, ref, r, ts, H

  // Documented example defaults instantiate and round-trip.
  for (const TemplateDescriptor &d : catalog) {
    Formula f = instantiate(d.example);
    CHECK(fragment_class(f) == FragmentClass::BoxDiamond);
    CHECK(parse_formula(to_text(f)) == f);
  }
}

TEST_CASE("template literals parse") {
  CHECK(is_template_literal("template:settling(x,ref=1,r=0.1,ts=20,H=40)"));
  CHECK_FALSE(is_template_literal("specs/overshoot.mitl"));

  TemplateInstance t =
      parse_template_literal("template:settling(x, ref=1, r=0.1, ts=20, H=40)");
  CHECK(t.template_id == "settling");
  CHECK(t.channel == "x");
  CHECK(t.parameters.at("r") == Rational(1, 10));
  CHECK(instantiate(t) == parse_formula("G[20,40]((x > 0.9) /\\ (x < 1.1))"));

  CHECK_THROWS_AS(parse_template_literal("template:settling"), Error);
  CHECK_THROWS_AS(parse_template_literal("template:settling(x,ref)"), Error);
  CHECK_THROWS_AS(parse_template_literal("template:settling()"), Error);
}

TEST_CASE("overshoot satisfaction is monotone in the margin") {
  Trace tr;
  for (std::int64_t t = 0; t <= 40; ++t) {
    tr.times.push_back(Rational(t));
  }
  std::vector<double> xs(tr.times.size(), 1.0);
  xs[10] = 1.45; // one excursion
  tr.channels["x"] = xs;

  bool previous = false;
  for (int m10 = 1; m10 <= 10; ++m10) {
    TemplateInstance t{"overshoot",
                       "x",
                       {{"ref", Rational(1)},
                        {"m", Rational(m10, 10)},
                        {"H", Rational(40)}}};
    bool sat = eval_bool(instantiate(t), tr, Rational(0));
    if (previous) {
      CHECK(sat); // once satisfied, larger margins stay satisfied
    }
    previous = sat;
  }
  CHECK(previous); // m = 1.0 admits the excursion
}

TEST_CASE("mining metadata marks the monotone parameters") {
  CHECK(parameter_minable("overshoot", "m"));
  CHECK(parameter_minable("settling", "r"));
  CHECK_FALSE(parameter_minable("overshoot", "ref"));
  CHECK_FALSE(parameter_minable("settling", "ts"));
  CHECK_FALSE(parameter_minable("nonexistent", "m"));
}
