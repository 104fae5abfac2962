#include "hfgtflow/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "hfgtflow/errors.hpp"
#include "hfgtflow/expr.hpp"

namespace hfgtflow {

using nlohmann::json;

const char *to_string(DocKind kind) {
  switch (kind) {
  case DocKind::HfgtSystem:
    return "hfgt-system";
  case DocKind::StockFlow:
    return "stockflow";
  case DocKind::HfnmcfSpec:
    return "hfnmcf-spec";
  case DocKind::MarkovSpec:
    return "markov-spec";
  }
  return "unknown";
}

std::optional<DocKind> doc_kind_from_string(const std::string &name) {
  if (name == "hfgt-system")
    return DocKind::HfgtSystem;
  if (name == "stockflow")
    return DocKind::StockFlow;
  if (name == "hfnmcf-spec")
    return DocKind::HfnmcfSpec;
  if (name == "markov-spec")
    return DocKind::MarkovSpec;
  return std::nullopt;
}

namespace {

struct Ctx {
  std::vector<Diagnostic> &diags;
  bool strict;

  void error(std::string loc, std::string msg, std::string code = "Schema") {
    diags.push_back({Diagnostic::Severity::Error, std::move(loc),
                     std::move(msg), std::move(code)});
  }
  void warn(std::string loc, std::string msg, std::string code = "Schema") {
    diags.push_back({Diagnostic::Severity::Warning, std::move(loc),
                     std::move(msg), std::move(code)});
  }
  bool failed() const {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic &d) {
      return d.severity == Diagnostic::Severity::Error;
    });
  }
};

bool is_finite_number(const json &j) {
  return j.is_number() && std::isfinite(j.get<double>());
}

void check_keys(const json &obj, const std::string &path,
                const std::vector<std::string> &allowed,
                const std::vector<std::string> &required, Ctx &ctx) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      if (ctx.strict)
        ctx.error(path + "/" + it.key(), "unknown field '" + it.key() + "'",
                  "UnknownField");
      else
        ctx.warn(path + "/" + it.key(), "ignoring unknown field '" + it.key() + "'",
                 "UnknownField");
    }
  }
  for (const auto &key : required)
    if (!obj.contains(key))
      ctx.error(path, "missing required field '" + key + "'", "MissingField");
}

bool need_object(const json &j, const std::string &path, Ctx &ctx) {
  if (!j.is_object()) {
    ctx.error(path, "expected an object");
    return false;
  }
  return true;
}

bool need_array(const json &j, const std::string &path, Ctx &ctx) {
  if (!j.is_array()) {
    ctx.error(path, "expected an array");
    return false;
  }
  return true;
}

std::optional<std::string> need_string(const json &obj, const std::string &path,
                                       const std::string &key, Ctx &ctx) {
  if (!obj.contains(key))
    return std::nullopt;
  if (!obj[key].is_string()) {
    ctx.error(path + "/" + key, "expected a string");
    return std::nullopt;
  }
  return obj[key].get<std::string>();
}

std::optional<double> need_number(const json &obj, const std::string &path,
                                  const std::string &key, Ctx &ctx) {
  if (!obj.contains(key))
    return std::nullopt;
  if (!is_finite_number(obj[key])) {
    ctx.error(path + "/" + key, "expected a finite number");
    return std::nullopt;
  }
  return obj[key].get<double>();
}

std::optional<long> need_integer(const json &obj, const std::string &path,
                                 const std::string &key, Ctx &ctx) {
  if (!obj.contains(key))
    return std::nullopt;
  if (!obj[key].is_number_integer()) {
    ctx.error(path + "/" + key, "expected an integer");
    return std::nullopt;
  }
  return obj[key].get<long>();
}

bool check_number_array(const json &j, const std::string &path, Ctx &ctx) {
  if (!need_array(j, path, ctx))
    return false;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i)
    if (!is_finite_number(j[i])) {
      ctx.error(path + "/" + std::to_string(i), "expected a finite number");
      ok = false;
    }
  return ok;
}

void check_expression(const json &obj, const std::string &path,
                      const std::string &key, Ctx &ctx) {
  auto text = need_string(obj, path, key, ctx);
  if (!text)
    return;
  try {
    parse_expr(*text);
  } catch (const Error &e) {
    ctx.error(path + "/" + key, e.what(), "BadExpression");
  }
}

void validate_stockflow(const json &j, Ctx &ctx) {
  check_keys(j,
             "", {"kind", "version", "stocks", "flows", "auxiliaries",
                  "constants", "exogenous", "lookups", "dt", "horizon"},
             {"stocks", "flows", "dt", "horizon"}, ctx);
  if (j.contains("stocks") && need_array(j["stocks"], "/stocks", ctx))
    for (std::size_t i = 0; i < j["stocks"].size(); ++i) {
      const std::string p = "/stocks/" + std::to_string(i);
      if (!need_object(j["stocks"][i], p, ctx))
        continue;
      check_keys(j["stocks"][i], p, {"name", "initial", "units"},
                 {"name", "initial"}, ctx);
      need_string(j["stocks"][i], p, "name", ctx);
      need_number(j["stocks"][i], p, "initial", ctx);
    }
  if (j.contains("flows") && need_array(j["flows"], "/flows", ctx))
    for (std::size_t i = 0; i < j["flows"].size(); ++i) {
      const std::string p = "/flows/" + std::to_string(i);
      if (!need_object(j["flows"][i], p, ctx))
        continue;
      check_keys(j["flows"][i], p, {"name", "source", "sink", "rate"},
                 {"name", "source", "sink", "rate"}, ctx);
      check_expression(j["flows"][i], p, "rate", ctx);
    }
  if (j.contains("auxiliaries") &&
      need_array(j["auxiliaries"], "/auxiliaries", ctx))
    for (std::size_t i = 0; i < j["auxiliaries"].size(); ++i) {
      const std::string p = "/auxiliaries/" + std::to_string(i);
      if (!need_object(j["auxiliaries"][i], p, ctx))
        continue;
      check_keys(j["auxiliaries"][i], p, {"name", "expression"},
                 {"name", "expression"}, ctx);
      check_expression(j["auxiliaries"][i], p, "expression", ctx);
    }
  if (j.contains("constants") && need_object(j["constants"], "/constants", ctx))
    for (auto it = j["constants"].begin(); it != j["constants"].end(); ++it)
      if (!is_finite_number(it.value()))
        ctx.error("/constants/" + it.key(), "expected a finite number");
  if (j.contains("exogenous") && need_object(j["exogenous"], "/exogenous", ctx))
    for (auto it = j["exogenous"].begin(); it != j["exogenous"].end(); ++it)
      check_number_array(it.value(), "/exogenous/" + it.key(), ctx);
  if (j.contains("lookups") && need_array(j["lookups"], "/lookups", ctx))
    for (std::size_t i = 0; i < j["lookups"].size(); ++i) {
      const std::string p = "/lookups/" + std::to_string(i);
      if (!need_object(j["lookups"][i], p, ctx))
        continue;
      check_keys(j["lookups"][i], p, {"name", "input", "x", "y"},
                 {"name", "input", "x", "y"}, ctx);
      if (j["lookups"][i].contains("x") && j["lookups"][i].contains("y") &&
          check_number_array(j["lookups"][i]["x"], p + "/x", ctx) &&
          check_number_array(j["lookups"][i]["y"], p + "/y", ctx)) {
        auto x = j["lookups"][i]["x"].get<std::vector<double>>();
        if (!std::is_sorted(x.begin(), x.end()) ||
            std::adjacent_find(x.begin(), x.end()) != x.end())
          ctx.error(p + "/x", "breakpoints must be strictly increasing");
        if (j["lookups"][i]["y"].size() != x.size())
          ctx.error(p + "/y", "breakpoint value count mismatch");
      }
    }
  if (auto dt = need_number(j, "", "dt", ctx); dt && *dt <= 0.0)
    ctx.error("/dt", "dt must be positive");
  if (auto h = need_integer(j, "", "horizon", ctx); h && *h < 0)
    ctx.error("/horizon", "horizon must be nonnegative");
}

const std::vector<std::string> &param_keys() {
  static const std::vector<std::string> keys{
      "lambda_perc",   "lambda_fw",       "rho_water",     "m_tds",
      "v_la",          "v_gwwith",        "v_gdis",        "elev_slope",
      "elev_intercept", "area_slope",     "area_intercept", "eta_t_slope",
      "eta_t_intercept", "eta_rho_slope", "eta_rho_intercept", "v_mono0",
      "v_aqui0"};
  return keys;
}

HfgtSystemDoc hfgt_from_json(const json &j);

void validate_hfgt(const json &j, Ctx &ctx) {
  check_keys(j,
             "", {"kind", "version", "operands", "resources", "processes",
                  "capabilities", "device_suite", "params", "place_labels"},
             {"operands", "resources", "processes", "capabilities"}, ctx);
  auto obj_list = [&](const char *field, const std::vector<std::string> &allowed,
                      const std::vector<std::string> &required) {
    if (!j.contains(field) ||
        !need_array(j[field], std::string("/") + field, ctx))
      return;
    for (std::size_t i = 0; i < j[field].size(); ++i) {
      const std::string p = std::string("/") + field + "/" + std::to_string(i);
      if (need_object(j[field][i], p, ctx))
        check_keys(j[field][i], p, allowed, required, ctx);
    }
  };
  obj_list("operands", {"id", "name", "state_net"}, {"id"});
  obj_list("resources", {"id", "name", "kind"}, {"id", "kind"});
  obj_list("processes", {"id", "name", "kind", "inputs", "outputs"},
           {"id", "inputs", "outputs"});
  obj_list("capabilities",
           {"id", "resource", "process", "origin", "destination", "duration"},
           {"id", "resource", "process", "origin", "destination"});
  if (auto suite = need_string(j, "", "device_suite", ctx);
      suite && *suite != "monolake")
    ctx.error("/device_suite", "unknown device suite '" + *suite + "'");
  if (j.contains("params") && need_object(j["params"], "/params", ctx)) {
    check_keys(j["params"], "/params", param_keys(), {}, ctx);
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
      if (!is_finite_number(it.value()))
        ctx.error("/params/" + it.key(), "expected a finite number");
  }
  if (j.contains("place_labels") &&
      need_array(j["place_labels"], "/place_labels", ctx))
    for (std::size_t i = 0; i < j["place_labels"].size(); ++i)
      if (!j["place_labels"][i].is_string())
        ctx.error("/place_labels/" + std::to_string(i), "expected a string");
  if (ctx.failed())
    return;
  try {
    hfgt_from_json(j); // referential integrity via the model builder
  } catch (const Error &e) {
    ctx.error("/capabilities", e.what(), e.code());
  }
}

MarkovSpec markov_from_json(const json &j);

void validate_markov(const json &j, Ctx &ctx) {
  check_keys(j, "", {"kind", "version", "tracks"}, {"tracks"}, ctx);
  if (!j.contains("tracks") || !need_array(j["tracks"], "/tracks", ctx))
    return;
  for (std::size_t i = 0; i < j["tracks"].size(); ++i) {
    const std::string p = "/tracks/" + std::to_string(i);
    if (!need_object(j["tracks"][i], p, ctx))
      continue;
    check_keys(j["tracks"][i], p, {"name", "values", "transition", "initial"},
               {"name", "values", "transition"}, ctx);
    if (j["tracks"][i].contains("values"))
      check_number_array(j["tracks"][i]["values"], p + "/values", ctx);
    if (j["tracks"][i].contains("transition") &&
        need_array(j["tracks"][i]["transition"], p + "/transition", ctx))
      for (std::size_t r = 0; r < j["tracks"][i]["transition"].size(); ++r)
        check_number_array(j["tracks"][i]["transition"][r],
                           p + "/transition/" + std::to_string(r), ctx);
  }
  if (ctx.failed())
    return;
  try {
    gen_exogenous(markov_from_json(j), 0, 0); // matrix validity
  } catch (const Error &e) {
    ctx.error("/tracks", e.what(), e.code());
  }
}

void validate_qp(const json &j, Ctx &ctx) {
  check_keys(j, "",
             {"kind", "version", "f_quad", "f_lin", "a", "b", "lower", "upper"},
             {"f_quad", "a", "b"}, ctx);
  std::size_t n = 0, m = 0;
  if (j.contains("f_quad") && check_number_array(j["f_quad"], "/f_quad", ctx))
    n = j["f_quad"].size();
  if (j.contains("f_lin") && check_number_array(j["f_lin"], "/f_lin", ctx) &&
      j["f_lin"].size() != n)
    ctx.error("/f_lin", "length must match f_quad");
  if (j.contains("a") && need_object(j["a"], "/a", ctx)) {
    check_keys(j["a"], "/a", {"rows", "cols", "entries"},
               {"rows", "cols", "entries"}, ctx);
    auto rows = need_integer(j["a"], "/a", "rows", ctx);
    auto cols = need_integer(j["a"], "/a", "cols", ctx);
    if (rows && *rows >= 0)
      m = std::size_t(*rows);
    if (cols && std::size_t(*cols) != n)
      ctx.error("/a/cols", "column count must match f_quad length");
    if (j["a"].contains("entries") &&
        need_array(j["a"]["entries"], "/a/entries", ctx))
      for (std::size_t i = 0; i < j["a"]["entries"].size(); ++i) {
        const auto &e = j["a"]["entries"][i];
        const std::string p = "/a/entries/" + std::to_string(i);
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || !is_finite_number(e[2])) {
          ctx.error(p, "expected [row, col, value]");
          continue;
        }
        if (e[0].get<long>() < 0 || std::size_t(e[0].get<long>()) >= m ||
            e[1].get<long>() < 0 || std::size_t(e[1].get<long>()) >= n)
          ctx.error(p, "entry out of range");
      }
  }
  if (j.contains("b") && check_number_array(j["b"], "/b", ctx) &&
      j["b"].size() != m)
    ctx.error("/b", "length must match a.rows");
  if (j.contains("lower") != j.contains("upper"))
    ctx.error("", "lower and upper must be given together");
  for (const char *side : {"lower", "upper"})
    if (j.contains(side) && check_number_array(j[side], std::string("/") + side, ctx) &&
        j[side].size() != n)
      ctx.error(std::string("/") + side, "length must match f_quad");
}

bool all_finite(const json &j, std::string path, std::string &bad) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    bad = path;
    return false;
  }
  if (j.is_array())
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!all_finite(j[i], path + "/" + std::to_string(i), bad))
        return false;
    }
  if (j.is_object())
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!all_finite(it.value(), path + "/" + it.key(), bad))
        return false;
  return true;
}

std::string canonical_dump(const json &j) {
  std::string bad;
  if (!all_finite(j, "", bad))
    throw Error(errc::invalid_document,
                "non-finite number at " + (bad.empty() ? "/" : bad));
  return j.dump(1) + "\n";
}

json reparse(const ModelDocument &doc) {
  json j = json::parse(doc.canonical, nullptr, false);
  if (j.is_discarded())
    throw Error(errc::invalid_document, "document body is not valid");
  return j;
}

HfgtSystemDoc hfgt_from_json(const json &j) {
  std::vector<Operand> operands;
  for (const auto &o : j["operands"])
    operands.push_back(
        {o["id"], o.value("name", std::string{}), o.value("state_net", false)});
  auto res_kind = [](const std::string &k) {
    if (k == "transformation")
      return ResourceKind::Transformation;
    if (k == "independent-buffer")
      return ResourceKind::IndependentBuffer;
    if (k == "transportation")
      return ResourceKind::Transportation;
    throw Error(errc::kind_violation, "unknown resource kind '" + k + "'");
  };
  std::vector<Resource> resources;
  for (const auto &r : j["resources"])
    resources.push_back(
        {r["id"], r.value("name", std::string{}), res_kind(r["kind"])});
  auto quantities = [](const json &arr) {
    std::vector<OperandQuantity> out;
    for (const auto &q : arr)
      out.push_back({q["operand"], q.value("quantity", 1.0)});
    return out;
  };
  std::vector<Process> processes;
  for (const auto &p : j["processes"])
    processes.push_back({p["id"], p.value("name", std::string{}),
                         p.value("kind", std::string{"transformation"}) ==
                                 "refined-transportation"
                             ? ProcessKind::RefinedTransportation
                             : ProcessKind::Transformation,
                         quantities(p["inputs"]), quantities(p["outputs"])});
  std::vector<Capability> capabilities;
  for (const auto &c : j["capabilities"])
    capabilities.push_back({c["id"], c["resource"], c["process"], c["origin"],
                            c["destination"], c.value("duration", 0)});

  HfgtSystemDoc out{build_system(std::move(operands), std::move(resources),
                                 std::move(processes),
                                 std::move(capabilities)),
                    j.value("device_suite", std::string{}),
                    MonoParams{},
                    {}};
  if (j.contains("params")) {
    const json &p = j["params"];
    MonoParams &mp = out.params;
    auto set = [&p](const char *key, double &field) {
      if (p.contains(key))
        field = p[key].get<double>();
    };
    set("lambda_perc", mp.lambda_perc);
    set("lambda_fw", mp.lambda_fw);
    set("rho_water", mp.rho_water);
    set("m_tds", mp.m_tds);
    set("v_la", mp.v_la);
    set("v_gwwith", mp.v_gwwith);
    set("v_gdis", mp.v_gdis);
    set("elev_slope", mp.elev_slope);
    set("elev_intercept", mp.elev_intercept);
    set("area_slope", mp.area_slope);
    set("area_intercept", mp.area_intercept);
    set("eta_t_slope", mp.eta_t_slope);
    set("eta_t_intercept", mp.eta_t_intercept);
    set("eta_rho_slope", mp.eta_rho_slope);
    set("eta_rho_intercept", mp.eta_rho_intercept);
    set("v_mono0", mp.v_mono0);
    set("v_aqui0", mp.v_aqui0);
  }
  if (j.contains("place_labels"))
    out.place_labels = j["place_labels"].get<std::vector<std::string>>();
  return out;
}

MarkovSpec markov_from_json(const json &j) {
  MarkovSpec spec;
  for (const auto &t : j["tracks"]) {
    MarkovTrack track;
    track.name = t["name"];
    track.values = t["values"].get<std::vector<double>>();
    for (const auto &row : t["transition"])
      track.transition.push_back(row.get<std::vector<double>>());
    track.initial_state = t.value("initial", 0);
    spec.tracks.push_back(std::move(track));
  }
  return spec;
}

} // namespace

ParseResult parse_document(const std::string &text,
                           std::optional<DocKind> hint, bool strict) {
  ParseResult result;
  Ctx ctx{result.diagnostics, strict};

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    ctx.error("byte " + std::to_string(e.byte), e.what(), "ParseError");
    return result;
  } catch (const json::exception &e) {
    // Overflowing literals such as 1e999 surface as out_of_range, not
    // parse_error.
    ctx.error("", e.what(), "ParseError");
    return result;
  }
  if (!j.is_object()) {
    ctx.error("", "document must be an object");
    return result;
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    ctx.error("/kind", "missing kind", "MissingField");
    return result;
  }
  auto kind = doc_kind_from_string(j["kind"].get<std::string>());
  if (!kind) {
    ctx.error("/kind", "unknown kind '" + j["kind"].get<std::string>() + "'");
    return result;
  }
  if (hint && *hint != *kind) {
    ctx.error("/kind", std::string("expected kind '") + to_string(*hint) +
                           "', found '" + to_string(*kind) + "'");
    return result;
  }
  int version = 1;
  if (j.contains("version")) {
    if (!j["version"].is_number_integer()) {
      ctx.error("/version", "expected an integer");
      return result;
    }
    version = j["version"].get<int>();
    if (version != 1) {
      ctx.error("/version",
                "unsupported version " + std::to_string(version));
      return result;
    }
  }

  switch (*kind) {
  case DocKind::StockFlow:
    validate_stockflow(j, ctx);
    break;
  case DocKind::HfgtSystem:
    validate_hfgt(j, ctx);
    break;
  case DocKind::MarkovSpec:
    validate_markov(j, ctx);
    break;
  case DocKind::HfnmcfSpec:
    validate_qp(j, ctx);
    break;
  }
  if (ctx.failed())
    return result;

  ModelDocument doc;
  doc.kind = *kind;
  doc.version = version;
  try {
    doc.canonical = canonical_dump(j);
  } catch (const Error &e) {
    ctx.error("", e.what(), e.code());
    return result;
  }
  result.document = std::move(doc);
  return result;
}

std::string serialize(const ModelDocument &document) {
  return canonical_dump(reparse(document));
}

StockFlowModel to_stockflow(const ModelDocument &document) {
  if (document.kind != DocKind::StockFlow)
    throw Error(errc::invalid_document, "not a stockflow document");
  json j = reparse(document);
  StockFlowModel m;
  for (const auto &s : j["stocks"])
    m.stocks.push_back({s["name"], s["initial"], s.value("units", std::string{})});
  for (const auto &f : j["flows"])
    m.flows.push_back({f["name"], f["source"], f["sink"],
                       parse_expr(f["rate"].get<std::string>())});
  if (j.contains("auxiliaries"))
    for (const auto &a : j["auxiliaries"])
      m.auxiliaries.push_back(
          {a["name"], parse_expr(a["expression"].get<std::string>())});
  if (j.contains("constants"))
    for (auto it = j["constants"].begin(); it != j["constants"].end(); ++it)
      m.constants[it.key()] = it.value().get<double>();
  if (j.contains("exogenous"))
    for (auto it = j["exogenous"].begin(); it != j["exogenous"].end(); ++it)
      m.exogenous[it.key()] = it.value().get<std::vector<double>>();
  if (j.contains("lookups"))
    for (const auto &lk : j["lookups"])
      m.lookups.push_back({lk["name"], lk["input"],
                           lk["x"].get<std::vector<double>>(),
                           lk["y"].get<std::vector<double>>()});
  m.dt = j["dt"];
  m.horizon = j["horizon"].get<std::size_t>();
  return m;
}

MarkovSpec to_markov(const ModelDocument &document) {
  if (document.kind != DocKind::MarkovSpec)
    throw Error(errc::invalid_document, "not a markov-spec document");
  return markov_from_json(reparse(document));
}

HfgtSystemDoc to_hfgt_system(const ModelDocument &document) {
  if (document.kind != DocKind::HfgtSystem)
    throw Error(errc::invalid_document, "not an hfgt-system document");
  return hfgt_from_json(reparse(document));
}

QpProblemDoc to_qp_problem(const ModelDocument &document) {
  if (document.kind != DocKind::HfnmcfSpec)
    throw Error(errc::invalid_document, "not an hfnmcf-spec document");
  json j = reparse(document);
  QpProblemDoc out;
  auto vec = [](const json &arr) {
    Eigen::VectorXd v(long(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
      v(long(i)) = arr[i].get<double>();
    return v;
  };
  out.f_quad = vec(j["f_quad"]);
  out.f_lin = j.contains("f_lin") ? vec(j["f_lin"])
                                  : Eigen::VectorXd::Zero(out.f_quad.size());
  out.a.rows = j["a"]["rows"].get<std::size_t>();
  out.a.cols = j["a"]["cols"].get<std::size_t>();
  for (const auto &e : j["a"]["entries"])
    out.a.add(e[0].get<std::size_t>(), e[1].get<std::size_t>(),
              e[2].get<double>());
  out.a.sort_and_combine();
  out.b = vec(j["b"]);
  if (j.contains("lower")) {
    out.lower = vec(j["lower"]);
    out.upper = vec(j["upper"]);
    out.has_bounds = true;
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ','))
    out.push_back(field);
  if (!line.empty() && line.back() == ',')
    out.push_back("");
  return out;
}

double parse_number(const std::string &s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(errc::invalid_document,
                "bad numeric value '" + s + "' on line " +
                    std::to_string(line_no));
  return v;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

} // namespace

std::map<std::string, std::vector<double>>
load_series(const std::string &csv,
            const std::vector<std::string> &required_columns) {
  std::istringstream ss(csv);
  std::string line;
  if (!std::getline(ss, line))
    throw Error(errc::invalid_document, "empty CSV");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  std::vector<std::string> header = split_csv_line(line);

  auto col_of = [&](const std::string &name) -> long {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : long(it - header.begin());
  };
  if (col_of("k") < 0)
    throw Error(errc::missing_column, "missing column 'k'");
  for (const auto &name : required_columns)
    if (col_of(name) < 0)
      throw Error(errc::missing_column, "missing column '" + name + "'");
  const std::size_t k_col = std::size_t(col_of("k"));

  std::map<std::string, std::vector<double>> out;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != k_col)
      out[header[c]] = {};

  long expected = 0;
  std::size_t line_no = 1;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw Error(errc::invalid_document,
                  "wrong field count on line " + std::to_string(line_no));
    const double kv = parse_number(fields[k_col], line_no);
    const long k = long(kv);
    if (double(k) != kv)
      throw Error(errc::invalid_document,
                  "index k must be an integer on line " +
                      std::to_string(line_no));
    if (k < expected)
      throw Error(errc::non_monotone_index,
                  "index k=" + std::to_string(k) + " repeats or decreases");
    if (k > expected)
      throw Error(errc::gap_in_series,
                  "missing step k=" + std::to_string(expected));
    for (std::size_t c = 0; c < header.size(); ++c)
      if (c != k_col)
        out[header[c]].push_back(parse_number(fields[c], line_no));
    ++expected;
  }
  return out;
}

ExogenousSeries load_exogenous_csv(const std::string &csv) {
  auto cols = load_series(csv, {"precip_ft_yr", "temp", "sgr_kaf_yr"});
  ExogenousSeries s;
  s.precip = cols["precip_ft_yr"];
  s.temp = cols["temp"];
  s.sgr = cols["sgr_kaf_yr"];
  return s;
}

std::string exogenous_to_csv(const ExogenousSeries &series) {
  const std::size_t n = std::max(
      {series.precip.size(), series.temp.size(), series.sgr.size()});
  auto at = [n](const std::vector<double> &v, std::size_t k) {
    if (v.size() == 1)
      return v[0];
    if (v.size() != n)
      throw Error(errc::dim_mismatch, "exogenous track lengths differ");
    return v[k];
  };
  std::string out = "k,precip_ft_yr,temp,sgr_kaf_yr\n";
  for (std::size_t k = 0; k < n; ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_double(at(series.precip, k));
    out += ',';
    out += format_double(at(series.temp, k));
    out += ',';
    out += format_double(at(series.sgr, k));
    out += '\n';
  }
  return out;
}

} // namespace hfgtflow
