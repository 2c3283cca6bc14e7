#include "omerdf/validator/validator.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "omerdf/ome/ome.hpp"

namespace omerdf::validator {

using ontology::PropertyDef;
using ontology::PropertyKind;
using rdf::Iri;
using rdf::Literal;
using rdf::Term;
using rdf::Triple;
namespace vocab = rdf::vocab;

namespace {

constexpr std::pair<ViolationCode, std::string_view> kNames[] = {
    {ViolationCode::UnknownClass, "UNKNOWN_CLASS"},
    {ViolationCode::UnknownProperty, "UNKNOWN_PROPERTY"},
    {ViolationCode::DomainMismatch, "DOMAIN_MISMATCH"},
    {ViolationCode::RangeMismatch, "RANGE_MISMATCH"},
    {ViolationCode::CardinalityMin, "CARDINALITY_MIN"},
    {ViolationCode::CardinalityMax, "CARDINALITY_MAX"},
    {ViolationCode::BadDatatype, "BAD_DATATYPE"},
    {ViolationCode::ValueOutOfRange, "VALUE_OUT_OF_RANGE"},
    {ViolationCode::UntypedSubject, "UNTYPED_SUBJECT"},
};

}  // namespace

std::string_view to_string(ViolationCode c) {
  for (const auto& [code, name] : kNames) {
    if (code == c) return name;
  }
  return "";
}

std::optional<ViolationCode> parse_violation_code(std::string_view s) {
  for (const auto& [code, name] : kNames) {
    if (name == s) return code;
  }
  return std::nullopt;
}

namespace {

std::string show(const Term& t) { return rdf::to_ntriples(t); }
std::string show(const Iri& i) { return rdf::to_ntriples(i); }

bool is_integer_type(std::string_view dt) {
  return rdf::numeric_kind(dt) == rdf::NumericKind::Integer;
}

/// True when a literal of datatype `dt` is acceptable where `range` is
/// expected, following XSD derivation among the numeric types.
bool datatype_compatible(const Iri& dt, const Iri& range) {
  if (dt == range) return true;
  const auto& r = range.value();
  if (r == vocab::kXsdDecimal) {
    return rdf::numeric_kind(dt.value()) == rdf::NumericKind::Integer ||
           rdf::numeric_kind(dt.value()) == rdf::NumericKind::Decimal;
  }
  if (r == vocab::kXsdInteger) return is_integer_type(dt.value());
  return false;
}

bool lexical_valid_for(const Literal& lit, const Iri& range) {
  const auto& r = range.value();
  if (r == vocab::kXsdDateTime) return ome::is_timestamp_with_zone(lit.lexical());
  if (r == vocab::kXsdPositiveInteger) {
    return lit.lexical().find_first_not_of("+0") != std::string::npos &&
           lit.lexical().find_first_not_of("+0123456789") == std::string::npos;
  }
  return rdf::is_numeric_lexical(rdf::numeric_kind(r), lit.lexical());
}

std::optional<double> numeric_value(const Literal& lit) {
  if (rdf::numeric_kind(lit.datatype().value()) == rdf::NumericKind::None) return std::nullopt;
  auto lex = std::string_view(lit.lexical());
  if (!lex.empty() && lex.front() == '+') lex.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), v);
  if (ec != std::errc() || ptr != lex.data() + lex.size()) return std::nullopt;
  return v;
}

class Checker {
 public:
  Checker(const rdf::Graph& g, const ontology::OntologyRegistry& r, const ValidateOptions& o)
      : g_(g), r_(r), opts_(o), type_(Iri::make(vocab::kRdfType)) {
    for (const auto& t : g_.triples()) {
      out_[t.subject()].push_back(&t);
      if (t.predicate() == type_) types_[t.subject()].push_back(t.object());
    }
  }

  ValidationReport run() {
    for (const auto& t : g_.triples()) {
      if (t.predicate() == type_) {
        check_type(t);
      } else {
        check_statement(t);
      }
    }
    for (const auto& [s, _] : out_) {
      if (!types_.count(s) && !is_external(s)) {
        add(ViolationCode::UntypedSubject, s, "subject has no rdf:type");
      }
      check_cardinality(s);
    }
    ValidationReport rep;
    rep.violations.assign(found_.begin(), found_.end());
    rep.checked_triples = g_.size();
    rep.passed = rep.violations.empty();
    return rep;
  }

 private:
  void add(ViolationCode c, const Term& s, std::string detail) {
    found_.insert({c, s, std::move(detail)});
  }

  bool is_external(const Term& t) const {
    const auto* iri = std::get_if<Iri>(&t);
    if (!iri) return false;
    return std::any_of(opts_.external_namespaces.begin(), opts_.external_namespaces.end(),
                       [&](const std::string& ns) { return iri->value().starts_with(ns); });
  }

  /// Registered classes asserted for `t`.
  std::vector<Iri> known_types(const Term& t) const {
    std::vector<Iri> out;
    const auto it = types_.find(t);
    if (it == types_.end()) return out;
    for (const auto& o : it->second) {
      const auto* iri = std::get_if<Iri>(&o);
      if (iri && r_.find_class(*iri)) out.push_back(*iri);
    }
    return out;
  }

  static bool accepts(const Iri& primary, const std::vector<Iri>& extra,
                      const std::vector<Iri>& types) {
    return std::any_of(types.begin(), types.end(), [&](const Iri& t) {
      return t == primary || std::find(extra.begin(), extra.end(), t) != extra.end();
    });
  }

  void check_type(const Triple& t) {
    const auto* cls = std::get_if<Iri>(&t.object());
    if (!cls) {
      add(ViolationCode::UnknownClass, t.subject(),
          "type " + show(t.object()) + " is not a class IRI");
    } else if (!r_.find_class(*cls)) {
      add(ViolationCode::UnknownClass, t.subject(),
          "type " + show(*cls) + " is not a registered class");
    }
  }

  void check_statement(const Triple& t) {
    const auto& pv = t.predicate().value();
    if (pv == std::string(vocab::kRdfs) + "label" || pv == std::string(vocab::kRdfs) + "comment") {
      return;
    }
    const auto* p = r_.find_property(t.predicate());
    if (!p) {
      add(ViolationCode::UnknownProperty, t.subject(),
          "predicate " + show(t.predicate()) + " is not a registered property");
      return;
    }
    const auto& s = t.subject();
    const bool typed = types_.count(s) > 0;
    const auto subject_types = known_types(s);
    if (typed && !subject_types.empty() && !accepts(p->domain, p->extra_domains, subject_types)) {
      add(ViolationCode::DomainMismatch, s,
          p->label + ": subject is not a " + show(p->domain) + describe_extra(p->extra_domains));
    }
    if (p->kind == PropertyKind::Object) {
      check_object_range(*p, t);
    } else {
      check_literal(*p, t);
    }
  }

  static std::string describe_extra(const std::vector<Iri>& extra) {
    std::string out;
    for (const auto& e : extra) out += " or " + show(e);
    return out;
  }

  void check_object_range(const PropertyDef& p, const Triple& t) {
    const auto& o = t.object();
    if (rdf::is_literal(o)) {
      add(ViolationCode::RangeMismatch, t.subject(),
          p.label + ": literal " + show(o) + " where a " + show(p.range) + " node is expected");
      return;
    }
    if (is_external(o)) return;
    const auto object_types = known_types(o);
    if (object_types.empty()) return;  // untyped link or unknown class, reported elsewhere
    if (!accepts(p.range, p.extra_ranges, object_types)) {
      add(ViolationCode::RangeMismatch, t.subject(),
          p.label + ": object " + show(o) + " is not a " + show(p.range) +
              describe_extra(p.extra_ranges));
    }
  }

  void check_literal(const PropertyDef& p, const Triple& t) {
    const auto* lit = std::get_if<Literal>(&t.object());
    if (!lit) {
      add(ViolationCode::RangeMismatch, t.subject(),
          p.label + ": node " + show(t.object()) + " where a " + show(p.range) +
              " literal is expected");
      return;
    }
    if (!datatype_compatible(lit->datatype(), p.range) || !lexical_valid_for(*lit, p.range)) {
      add(ViolationCode::BadDatatype, t.subject(),
          p.label + ": literal \"" + lit->lexical() + "\" of type " + show(lit->datatype()) +
              " is not a valid " + show(p.range));
      return;
    }
    if (p.value_range) {
      const auto v = numeric_value(*lit);
      if (v && !p.value_range->contains(*v)) {
        add(ViolationCode::ValueOutOfRange, t.subject(),
            p.label + ": value " + lit->lexical() + " outside " + p.value_range->describe() +
                (p.unit ? " " + *p.unit : ""));
      }
    }
  }

  bool condition_holds(const Term& s, const ontology::RequiredWhen& cond) const {
    for (const auto* t : out_.at(s)) {
      if (t->predicate() != cond.via) continue;
      const auto ts = known_types(t->object());
      if (std::find(ts.begin(), ts.end(), cond.target_class) != ts.end()) return true;
    }
    return false;
  }

  void check_cardinality(const Term& s) {
    const auto types = known_types(s);
    if (types.empty()) return;
    std::map<Iri, std::size_t> counts;
    for (const auto* t : out_.at(s)) ++counts[t->predicate()];
    for (const auto& p : r_.properties()) {
      if (!accepts(p.domain, p.extra_domains, types)) continue;
      const auto n = counts.count(p.iri) ? counts.at(p.iri) : 0;
      if (n < p.min_count && (!p.required_when || condition_holds(s, *p.required_when))) {
        std::string why = p.label + " (" + show(p.iri) + ") has " + std::to_string(n) +
                          " value(s); minCount " + std::to_string(p.min_count);
        if (p.required_when) {
          why += " when " + show(p.required_when->via) + " is a " +
                 show(p.required_when->target_class);
        }
        add(ViolationCode::CardinalityMin, s, why);
      }
      if (p.max_count && n > *p.max_count) {
        add(ViolationCode::CardinalityMax, s,
            p.label + " (" + show(p.iri) + ") has " + std::to_string(n) +
                " value(s); maxCount " + std::to_string(*p.max_count));
      }
    }
  }

  const rdf::Graph& g_;
  const ontology::OntologyRegistry& r_;
  const ValidateOptions& opts_;
  Iri type_;
  std::map<Term, std::vector<const Triple*>> out_;
  std::map<Term, std::vector<Term>> types_;
  std::set<Violation> found_;
};

}  // namespace

ValidationReport validate(const rdf::Graph& g, const ontology::OntologyRegistry& r,
                          const ValidateOptions& opts) {
  return Checker(g, r, opts).run();
}

std::string explain(const Violation& v) {
  return std::string(to_string(v.code)) + " " + show(v.subject) + ": " + v.detail;
}

std::string format_report_tsv(const ValidationReport& report) {
  std::string out;
  for (const auto& v : report.violations) {
    out += to_string(v.code);
    out += '\t';
    out += show(v.subject);
    out += '\t';
    out += v.detail;
    out += '\n';
  }
  return out;
}

std::string format_report_text(const ValidationReport& report) {
  std::string out;
  for (const auto& v : report.violations) out += explain(v) + "\n";
  out += std::to_string(report.violations.size()) + " violation(s) in " +
         std::to_string(report.checked_triples) + " triple(s)\n";
  return out;
}

}  // namespace omerdf::validator
