#pragma once

#include <map>
#include <string>
#include <vector>

#include "speclint/formula.hpp"

namespace speclint {

/* A parameterized requirement shape that instantiates to a fragment
 * formula once its parameters are fixed. */
struct TemplateInstance {
  std::string template_id; // "settling" or "overshoot"
  std::string channel;
  std::map<std::string, Rational> parameters;
};

struct TemplateParameterInfo {
  std::string name;
  std::string doc;
  bool minable; // eval_bool is monotone in this parameter
};

struct TemplateDescriptor {
  std::string id;
  std::string doc;
  std::vector<TemplateParameterInfo> parameters; // channel first
  TemplateInstance example; // documented defaults, always instantiable
};

/* Catalog in stable order: settling, then overshoot.
 *
 *   settling(ch, ref, r, ts, H):  G[ts,H]((ch > ref-r) /\ (ch < ref+r))
 *       the signal stays within the region ref +/- r from ts to H;
 *       requires r > 0, ts >= 0, H > ts.
 *   overshoot(ch, ref, m, H):     G[0,H](ch < ref*(1+m))
 *       the signal never exceeds the reference by the margin m;
 *       requires ref > 0, m > 0, H > 0.
 */
const std::vector<TemplateDescriptor> &list_templates();

/* Builds the formula; throws Error when a parameter bound is violated or
 * a parameter is missing/unknown. */
Formula instantiate(const TemplateInstance &t);

/* "template:settling(x,ref=1,r=0.1,ts=20,H=40)" -> TemplateInstance.
 * The first argument is the channel, the rest are key=value rationals. */
TemplateInstance parse_template_literal(const std::string &text);

bool is_template_literal(const std::string &text);

/* True iff the named parameter may be mined by bisection (Boolean
 * satisfaction is monotone in it for a fixed trace). */
bool parameter_minable(const std::string &template_id,
                       const std::string &parameter);

} // namespace speclint
