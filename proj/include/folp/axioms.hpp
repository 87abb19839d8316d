// Axiom-schema recognition and constant specifications (including the
// witness-extended CS(V) membership test).
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "folp/syntax.hpp"

namespace folp {

enum class SchemaId {
  A1_K,
  A1_S,
  A1_NEG,
  A1_CP,
  A1_BOT,
  A1_AND1,
  A1_AND2,
  A1_AND3,
  A1_OR1,
  A1_OR2,
  A1_OR3,
  A1_IFF1,
  A1_IFF2,
  A1_IFF3,
  A1_UI,
  A1_UD,
  A1_EI,
  A1_ED,
  A2,
  A3,
  B1,
  B2,
  B3L,
  B3R,
  B4,
  B5,
  Bb,
  B6,
};

const std::vector<SchemaId>& all_schemas();
std::string to_string(SchemaId s);
std::optional<SchemaId> schema_from_string(const std::string& s);
// Is the schema an axiom of the given logic? (Bb only FOLPb, B6 only FOJT45.)
bool schema_in_logic(SchemaId s, Logic logic);

struct MatchReport {
  SchemaId schema;
  std::string instantiation;  // human-readable description of the match
};

std::optional<MatchReport> match_axiom(SchemaId schema, const FormulaPtr& phi, Logic logic);
// Convenience: first schema of the logic that phi instantiates.
std::optional<MatchReport> match_any_axiom(const FormulaPtr& phi, Logic logic);

struct UnknownConstant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstantSpecification {
  enum class Mode { Explicit, Schematic };
  Mode mode = Mode::Schematic;
  // Explicit mode: finite list of entries c : phi.
  std::vector<std::pair<std::string, FormulaPtr>> entries;
  // Schematic mode: schema -> constant name.
  std::map<SchemaId, std::string> schema_constants;

  static ConstantSpecification schematic();                 // canonical c_<suffix> names
  static ConstantSpecification explicit_list(
      std::vector<std::pair<std::string, FormulaPtr>> entries);

  // Constant assigned to a schema (schematic mode).
  const std::string& constant_for(SchemaId s) const;
};

// Canonical schematic constant name for a schema (c_K, c_UI, c_A2, c_B1, ...).
std::string schematic_constant_name(SchemaId s);

bool cs_contains(const ConstantSpecification& cs, const std::string& c, const FormulaPtr& phi,
                 Logic logic);
// CS(V): membership allowing injective replacement of some free basic
// variables by witness variables.
bool csv_contains(const ConstantSpecification& cs, const std::string& c, const FormulaPtr& psi,
                  Logic logic);
bool is_variant_closed(const ConstantSpecification& cs);

}  // namespace folp
