// JSON documents for groupoids and bibundles, and dumps of algebras,
// bimodules, KK classes and reports.
#pragma once

#include <string>

#include "json.hpp"

#include "qfunctor/groupoid.hpp"
#include "qfunctor/hilbmod.hpp"
#include "qfunctor/kktheory.hpp"
#include "qfunctor/quantfunctor.hpp"

namespace qf {

using Json = nlohmann::ordered_json;

/// `source` names the document in error messages (usually the file name).
/// Errors are ParseError with the file and a JSON pointer to the offending
/// field, or the byte offset for syntax errors.
FiniteGroupoid groupoid_from_json(const Json& doc, const std::string& source = "<input>");
Bibundle bibundle_from_json(const Json& doc, const std::string& source = "<input>");

Json to_json(const FiniteGroupoid& g);
Json to_json(const Bibundle& b);

Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);
FiniteGroupoid load_groupoid(const std::string& path);
Bibundle load_bibundle(const std::string& path);

/// [num, den]; components that do not fit in 64 bits become strings.
Json rational_json(const Rational& r);
/// [[re_num, re_den], [im_num, im_den]]
Json complex_json(const Cq& c);

Json dump_algebra(const FinCStar& a);
Json dump_bimodule(const HilbertBimodule& e);
Json dump_kk(const KKClass& x);
Json dump_report(const FunctorialityReport& r);

}  // namespace qf
