#ifndef HFGTFLOW_MODEL_IO_HPP
#define HFGTFLOW_MODEL_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hfgtflow/incidence.hpp"
#include "hfgtflow/monolake.hpp"
#include "hfgtflow/sd_engine.hpp"

namespace hfgtflow {

enum class DocKind { HfgtSystem, StockFlow, HfnmcfSpec, MarkovSpec };

const char *to_string(DocKind kind);
std::optional<DocKind> doc_kind_from_string(const std::string &name);

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string location; // JSON pointer or "byte N"
  std::string message;
  std::string code;
};

/// A validated document. `canonical` is the serialized form of record:
/// sorted keys, fixed formatting, finite numbers only.
struct ModelDocument {
  DocKind kind = DocKind::StockFlow;
  int version = 1;
  std::string canonical;

  friend bool operator==(const ModelDocument &, const ModelDocument &) = default;
};

struct ParseResult {
  std::optional<ModelDocument> document;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return document.has_value(); }
};

/// Total: any input yields a document or diagnostics, never a throw. Strict
/// mode rejects unknown fields; lenient mode downgrades them to warnings.
ParseResult parse_document(const std::string &text,
                           std::optional<DocKind> hint = std::nullopt,
                           bool strict = true);

/// Canonical text; parse(serialize(d)) is structurally equal to d.
/// Throws InvalidDocument when the document body is not valid.
std::string serialize(const ModelDocument &document);

StockFlowModel to_stockflow(const ModelDocument &document);
MarkovSpec to_markov(const ModelDocument &document);

/// HFGT system document plus the optional device-suite binding that lets one
/// file drive both engines.
struct HfgtSystemDoc {
  SystemModel system;
  std::string device_suite; // "" or "monolake"
  MonoParams params;
  std::vector<std::string> place_labels;
};

HfgtSystemDoc to_hfgt_system(const ModelDocument &document);

/// Raw canonical QP: 0.5 x' diag(f_quad) x + f_lin' x, a x = b, optional box.
struct QpProblemDoc {
  Eigen::VectorXd f_quad;
  Eigen::VectorXd f_lin;
  CooMatrix a;
  Eigen::VectorXd b;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  bool has_bounds = false;
};

QpProblemDoc to_qp_problem(const ModelDocument &document);

/// Strict CSV ingestion: integer index column `k` starting at 0, dense and
/// strictly increasing. Errors: MissingColumn, NonMonotoneIndex, GapInSeries.
std::map<std::string, std::vector<double>>
load_series(const std::string &csv,
            const std::vector<std::string> &required_columns);

/// Schema: k,precip_ft_yr,temp,sgr_kaf_yr.
ExogenousSeries load_exogenous_csv(const std::string &csv);
std::string exogenous_to_csv(const ExogenousSeries &series);

} // namespace hfgtflow

#endif
