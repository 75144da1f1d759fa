#include "speclint/templates.hpp"

#include <algorithm>

#include "speclint/errors.hpp"

namespace speclint {

namespace {

const Rational &require_param(const TemplateInstance &t, const char *name) {
  auto it = t.parameters.find(name);
  if (it == t.parameters.end()) {
    throw Error("template '" + t.template_id + "' needs parameter '" + name +
                "'");
  }
  return it->second;
}

void reject_unknown(const TemplateInstance &t,
                    std::initializer_list<const char *> known) {
  for (const auto &[name, _] : t.parameters) {
    if (std::find_if(known.begin(), known.end(), [&](const char *k) {
          return name == k;
        }) == known.end()) {
      throw Error("template '" + t.template_id + "' has no parameter '" +
                  name + "'");
    }
  }
}

Formula instantiate_settling(const TemplateInstance &t) {
  reject_unknown(t, {"ref", "r", "ts", "H"});
  const Rational &ref = require_param(t, "ref");
  const Rational &r = require_param(t, "r");
  const Rational &ts = require_param(t, "ts");
  const Rational &H = require_param(t, "H");
  if (!(Rational(0) < r)) {
    throw Error("settling region r must be positive, got " + r.str());
  }
  if (ts.is_negative()) {
    throw Error("settling time ts must be nonnegative, got " + ts.str());
  }
  if (!(ts < H)) {
    throw Error("end time H must exceed settling time ts, got ts=" +
                ts.str() + ", H=" + H.str());
  }
  return Formula::always(
      TimeInterval(ts, H),
      Formula::conjunction(
          {Formula::threshold(t.channel, Comparator::Gt, ref - r),
           Formula::threshold(t.channel, Comparator::Lt, ref + r)}));
}

Formula instantiate_overshoot(const TemplateInstance &t) {
  reject_unknown(t, {"ref", "m", "H"});
  const Rational &ref = require_param(t, "ref");
  const Rational &m = require_param(t, "m");
  const Rational &H = require_param(t, "H");
  if (!(Rational(0) < ref)) {
    throw Error("overshoot margin semantics need a positive reference, got " +
                ref.str());
  }
  if (!(Rational(0) < m)) {
    throw Error("overshoot margin m must be positive, got " + m.str());
  }
  if (!(Rational(0) < H)) {
    throw Error("end time H must be positive, got " + H.str());
  }
  return Formula::always(
      TimeInterval(Rational(0), H),
      Formula::threshold(t.channel, Comparator::Lt,
                         ref * (Rational(1) + m)));
}

std::vector<TemplateDescriptor> build_catalog() {
  TemplateDescriptor settling;
  settling.id = "settling";
  settling.doc = "signal stays inside the region ref +/- r from ts to H";
  settling.parameters = {
      {"channel", "signal channel the requirement constrains", false},
      {"ref", "reference value the signal settles around", false},
      {"r", "half-width of the settling region (> 0)", true},
      {"ts", "settling time: start of the enforced window (>= 0)", false},
      {"H", "end of the enforced window (> ts)", false},
  };
  settling.example = {"settling",
                      "x",
                      {{"ref", Rational(1)},
                       {"r", Rational(1, 10)},
                       {"ts", Rational(20)},
                       {"H", Rational(40)}}};

  TemplateDescriptor overshoot;
  overshoot.id = "overshoot";
  overshoot.doc = "signal never exceeds the reference by margin m up to H";
  overshoot.parameters = {
      {"channel", "signal channel the requirement constrains", false},
      {"ref", "reference value (> 0)", false},
      {"m", "relative overshoot margin (> 0)", true},
      {"H", "end of the enforced window (> 0)", false},
  };
  overshoot.example = {"overshoot",
                       "x",
                       {{"ref", Rational(1)},
                        {"m", Rational(1, 5)},
                        {"H", Rational(40)}}};

  return {settling, overshoot};
}

} // namespace

const std::vector<TemplateDescriptor> &list_templates() {
  static const std::vector<TemplateDescriptor> catalog = build_catalog();
  return catalog;
}

Formula instantiate(const TemplateInstance &t) {
  if (t.channel.empty()) {
    throw Error("template instance needs a channel");
  }
  if (t.template_id == "settling") {
    return instantiate_settling(t);
  }
  if (t.template_id == "overshoot") {
    return instantiate_overshoot(t);
  }
  throw Error("unknown template '" + t.template_id + "'");
}

bool is_template_literal(const std::string &text) {
  return text.rfind("template:", 0) == 0;
}

TemplateInstance parse_template_literal(const std::string &text) {
  if (!is_template_literal(text)) {
    throw Error("template literal must start with 'template:'");
  }
  std::string body = text.substr(9);
  std::size_t open = body.find('(');
  std::size_t close = body.rfind(')');
  if (open == std::string::npos || close == std::string::npos ||
      close != body.size() - 1 || close < open) {
    throw Error("malformed template literal '" + text + "'");
  }
  TemplateInstance inst;
  inst.template_id = body.substr(0, open);
  std::string args = body.substr(open + 1, close - open - 1);

  std::vector<std::string> parts;
  std::string cur;
  for (char c : args) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty() || !parts.empty()) {
    parts.push_back(cur);
  }
  if (parts.empty() || parts.front().empty()) {
    throw Error("template literal needs a channel as its first argument");
  }
  inst.channel = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    std::size_t eq = parts[i].find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error("template argument '" + parts[i] +
                  "' must have the form name=value");
    }
    std::string name = parts[i].substr(0, eq);
    Rational value = Rational::parse(parts[i].substr(eq + 1));
    if (!inst.parameters.emplace(name, value).second) {
      throw Error("duplicate template argument '" + name + "'");
    }
  }
  return inst;
}

bool parameter_minable(const std::string &template_id,
                       const std::string &parameter) {
  for (const TemplateDescriptor &d : list_templates()) {
    if (d.id != template_id) {
      continue;
    }
    for (const TemplateParameterInfo &p : d.parameters) {
      if (p.name == parameter) {
        return p.minable;
      }
    }
  }
  return false;
}

} // namespace speclint
