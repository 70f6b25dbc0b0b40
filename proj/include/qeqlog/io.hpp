#pragma once

#include <json.hpp>
#include <string>

#include "qeqlog/deduce.hpp"
#include "qeqlog/free.hpp"
#include "qeqlog/gmet.hpp"
#include "qeqlog/monad.hpp"
#include "qeqlog/qalg.hpp"

namespace qeq::io {

using Json = nlohmann::ordered_json;

/// A distance or eps: a fraction string "1/2", a decimal string, or a JSON number.
Rational read_value(const Json& j, const Grid& grid);
Json write_value(const Rational& r);

Signature read_signature(const Json& j);
Json write_signature(const Signature& sig);

FuzzySpace read_space(const Json& j, const Grid& grid);
Json write_space(const FuzzySpace& sp);

GMetSpec read_spec(const Json& j);
Json write_spec(const GMetSpec& spec);

QuantAlgebra read_algebra(const Json& j, const Signature& sig, const Grid& grid);
Json write_algebra(const QuantAlgebra& alg);

/// "context" may be an inline space or, with `spaces`, the name of one.
Judgment read_judgment(const Json& j, const Signature& sig, const Grid& grid, const Json* spaces = nullptr);
Json write_judgment(const Judgment& j);

/// A list of judgments, or {"name":..., "judgments": [...]}.
Theory read_theory(const Json& j, const Signature& sig, const Grid& grid, const Json* spaces = nullptr);

Json write_fact(const Fact& f);
Json write_derivation(const Derivation& d);
Json write_free(const FreeAlgebra& f);
Json write_law(const LawReport& r);
Json write_model_report(const ModelCheckReport& r);

}  // namespace qeq::io
