#include "facteq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace facteq::io {

namespace {

std::string_view kind_name(FactorialKind k) { return k == FactorialKind::Factorial ? "FACTORIAL" : "DOUBLE_FACTORIAL"; }

FactorialKind parse_kind(const std::string& s) {
  if (s == "FACTORIAL") return FactorialKind::Factorial;
  if (s == "DOUBLE_FACTORIAL") return FactorialKind::DoubleFactorial;
  throw DataError("unknown factorial kind: " + s);
}

Json str_list(std::span<const mpz_class> v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

std::vector<mpz_class> mpz_list(const Json& j) {
  if (!j.is_array()) throw DataError("expected an array of integers");
  std::vector<mpz_class> out;
  for (const auto& e : j) {
    mpz_class v;
    const std::string s = e.is_string() ? e.get<std::string>() : e.dump();
    if (v.set_str(s, 10) != 0) throw DataError("bad integer: " + s);
    out.push_back(v);
  }
  return out;
}

mpz_class mpz_of(const Json& j) {
  auto v = mpz_list(Json::array({j}));
  return v.front();
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("missing key: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad value for ") + key + ": " + e.what());
  }
}

Json equation_head(const Equation& eq) {
  Json j;
  j["family"] = std::string(to_string(eq.family));
  if (eq.is_sum()) {
    j["A"] = eq.A;
    j["B"] = eq.B;
  } else {
    j["b"] = eq.b;
    j["kind"] = std::string(kind_name(eq.kind));
  }
  return j;
}

void read_equation_head(const Json& j, Equation& eq) {
  const auto fam = parse_family(field<std::string>(j, "family"));
  if (!fam) throw DataError("unknown family");
  eq.family = *fam;
  if (eq.is_sum()) {
    eq.A = field<std::int64_t>(j, "A");
    eq.B = field<std::int64_t>(j, "B");
  } else {
    eq.b = field<std::int64_t>(j, "b");
    eq.kind = parse_kind(field<std::string>(j, "kind"));
  }
}

std::string cell_string(std::span<const std::uint64_t> cell) {
  std::string s;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(cell[i]);
  }
  return s;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string small_decimal(const mpz_class& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 10) > 41) return {};
  static const mpz_class limit = [] {
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, 40);
    return t;
  }();
  return abs(v) <= limit ? v.get_str() : std::string();
}

Json to_json(const FactorizationSketch& sk) {
  Json j;
  j["sign"] = sk.sign;
  Json fs = Json::array();
  for (const auto& [p, e] : sk.factors) fs.push_back(Json::array({p.get_str(), e}));
  j["factors"] = fs;
  j["unfactored"] = sk.unfactored.get_str();
  return j;
}

FactorizationSketch sketch_from_json(const Json& j) {
  FactorizationSketch sk;
  sk.sign = field<int>(j, "sign");
  if (sk.sign != 1 && sk.sign != -1 && sk.sign != 0) throw DataError("bad sign");
  for (const auto& pe : j.at("factors")) {
    if (!pe.is_array() || pe.size() != 2) throw DataError("bad factor entry");
    sk.multiply(mpz_of(pe[0]), pe[1].get<std::uint32_t>());
  }
  sk.unfactored = mpz_of(j.at("unfactored"));
  return sk;
}

Json to_json(const FactorList& fl) {
  Json j;
  j["unit"] = fl.unit.get_str();
  Json es = Json::array();
  for (const auto& e : fl.entries) {
    Json ej;
    ej["coeffs"] = str_list(e.coeffs);
    ej["multiplicity"] = e.multiplicity;
    es.push_back(ej);
  }
  j["entries"] = es;
  return j;
}

FactorList factor_list_from_json(const Json& j) {
  FactorList fl;
  fl.unit = j.contains("unit") ? mpz_of(j.at("unit")) : mpz_class(1);
  if (!j.contains("entries") || !j.at("entries").is_array()) throw DataError("factor_list needs entries");
  for (const auto& ej : j.at("entries")) {
    FactorEntry e;
    e.coeffs = mpz_list(ej.at("coeffs"));
    e.multiplicity = ej.contains("multiplicity") ? ej.at("multiplicity").get<std::uint32_t>() : 1;
    if (e.multiplicity == 0) throw DataError("factor multiplicity must be positive");
    fl.entries.push_back(std::move(e));
  }
  fl.declared = true;
  return fl;
}

Json rhs_to_json(const RightSide& rhs) {
  Json j;
  if (const auto* f = std::get_if<BinaryForm>(&rhs)) {
    j["target"] = "form";
    j["coeffs"] = str_list(f->coeffs());
    if (f->factor_list() && f->factor_list()->declared) j["factor_list"] = to_json(*f->factor_list());
  } else {
    const auto& p = std::get<UnivariatePoly>(rhs);
    j["target"] = "poly";
    j["coeffs"] = str_list(p.descending());
    if (p.factor_list() && p.factor_list()->declared) j["factor_list"] = to_json(*p.factor_list());
  }
  return j;
}

RightSide rhs_from_json(const Json& j) {
  const auto target = field<std::string>(j, "target");
  auto coeffs = mpz_list(j.at("coeffs"));
  try {
    if (target == "form") {
      BinaryForm f(std::move(coeffs));
      if (j.contains("factor_list")) f.set_factor_list(factor_list_from_json(j.at("factor_list")));
      return f;
    }
    if (target == "poly") {
      auto p = UnivariatePoly::from_descending(std::move(coeffs));
      if (j.contains("factor_list")) p.set_factor_list(factor_list_from_json(j.at("factor_list")));
      return p;
    }
  } catch (const InputError& e) {
    throw DataError(std::string("bad right side: ") + e.what());
  }
  throw DataError("unknown target: " + target);
}

Json to_json(const Certificate& c) {
  Json j = equation_head(c.equation);
  j["cell"] = c.cell;
  const Json rhs = rhs_to_json(c.equation.rhs);
  j["form_coeffs"] = rhs["coeffs"];
  j["scaling"] = c.equation.scaling.get_str();
  j["prime"] = c.prime;
  j["valuation"] = c.valuation;
  j["forced_exponent"] = c.forced_exponent;
  j["rule"] = std::string(to_string(c.rule));
  j["checker_version"] = c.checker_version;
  j["reason"] = std::string(to_string(c.reason));
  j["target"] = rhs["target"];
  if (rhs.contains("factor_list")) j["factor_list"] = rhs["factor_list"];
  j["notes"] = c.notes;
  return j;
}

Certificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("certificate must be a JSON object");
  Certificate c;
  read_equation_head(j, c.equation);
  c.cell = field<std::vector<std::uint64_t>>(j, "cell");
  Json rhs;
  rhs["target"] = j.contains("target") ? j.at("target") : Json(c.equation.is_binary() ? "form" : "poly");
  rhs["coeffs"] = j.at("form_coeffs");
  if (j.contains("factor_list")) rhs["factor_list"] = j.at("factor_list");
  c.equation.rhs = rhs_from_json(rhs);
  c.equation.scaling = j.contains("scaling") ? mpz_of(j.at("scaling")) : mpz_class(1);
  c.prime = field<std::uint64_t>(j, "prime");
  c.valuation = field<std::uint64_t>(j, "valuation");
  c.forced_exponent = field<std::uint32_t>(j, "forced_exponent");
  const auto rule = parse_rule(field<std::string>(j, "rule"));
  if (!rule) throw DataError("unknown rule");
  c.rule = *rule;
  c.checker_version = field<std::string>(j, "checker_version");
  const std::string reason = j.contains("reason") ? j.at("reason").get<std::string>() : "NONE";
  c.reason = ObstructionReason::None;
  for (auto r : {ObstructionReason::None, ObstructionReason::NoRootModQ, ObstructionReason::LinearFactorMultiplicity})
    if (reason == to_string(r)) c.reason = r;
  c.notes = j.contains("notes") ? j.at("notes").get<std::string>() : std::string();
  return c;
}

std::string certificate_id(const Certificate& c) {
  std::string s = "cert_" + std::string(to_string(c.equation.family));
  for (auto v : c.cell) s += "_" + std::to_string(v);
  return s + "_q" + std::to_string(c.prime);
}

Json to_json(const CellRecord& r) {
  Json j;
  j["cell"] = r.cell;
  j["status"] = std::string(to_string(r.status));
  j["witness"] = str_list(r.witness);
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  j["note"] = r.note;
  j["in_hypothesis_region"] = r.in_hypothesis_region;
  j["left"] = to_json(r.left);
  return j;
}

CellRecord record_from_json(const Json& j) {
  CellRecord r;
  r.cell = field<std::vector<std::uint64_t>>(j, "cell");
  const auto st = parse_cell_status(field<std::string>(j, "status"));
  if (!st) throw DataError("unknown cell status");
  r.status = *st;
  r.witness = mpz_list(j.at("witness"));
  if (j.contains("certificate") && !j.at("certificate").is_null())
    r.certificate = certificate_from_json(j.at("certificate"));
  r.note = field<std::string>(j, "note");
  r.in_hypothesis_region = field<bool>(j, "in_hypothesis_region");
  r.left = sketch_from_json(j.at("left"));
  return r;
}

Json canonical_task_json(const SearchTask& t) {
  Json j = equation_head(t.equation);
  j["rhs"] = rhs_to_json(t.equation.rhs);
  j["scaling"] = t.equation.scaling.get_str();
  j["n_min"] = t.n_min;
  j["n_max"] = t.n_max;
  if (t.equation.is_sum()) {
    j["m_min"] = t.m_min;
    j["include_diagonal"] = t.include_diagonal;
  } else {
    j["arity"] = t.arity;
    j["allow_infinite"] = t.allow_infinite;
  }
  j["prime_budget"] = t.certify.prime_budget;
  j["lift_cap"] = t.certify.valuation.lift_cap;
  j["ball"] = t.ball;
  j["max_x_range"] = t.max_x_range;
  j["trial_bound"] = t.factoring.trial_bound;
  j["rho_iterations"] = t.factoring.rho_iterations;
  j["rho_attempts"] = t.factoring.rho_attempts;
  j["cross_check"] = t.cross_check;
  return j;
}

std::string task_hash(const SearchTask& t) { return hex64(fnv1a64(canonical_task_json(t).dump())); }

Json checkpoint_json(const std::string& hash, const std::vector<CellRecord>& records) {
  Json j;
  j["version"] = kCheckpointVersion;
  j["task_hash"] = hash;
  j["completed"] = records.size();
  Json rs = Json::array();
  for (const auto& r : records) rs.push_back(to_json(r));
  j["records"] = rs;
  return j;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("checkpoint is not valid JSON: " + std::string(e.what()));
  }
  if (field<int>(j, "version") != kCheckpointVersion) throw DataError("unsupported checkpoint version");
  Checkpoint cp;
  cp.task_hash = field<std::string>(j, "task_hash");
  for (const auto& r : j.at("records")) cp.records.push_back(record_from_json(r));
  if (cp.records.size() != field<std::size_t>(j, "completed")) throw DataError("checkpoint record count mismatch");
  return cp;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ResourceError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ResourceError("rename failed: " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

std::string report_csv(const SearchReport& report, const Equation& eq, std::string_view config_hash) {
  const std::vector<std::string> header = {"family", "cell", "status", "x", "y", "prime", "valuation",
                                           "forced_exponent", "rule", "certificate", "in_hypothesis_region",
                                           "left_value", "left_factorization", "note", "config_hash"};
  std::string out = csv_row(header);
  for (const auto& r : report.records) {
    std::vector<std::string> row;
    row.emplace_back(to_string(eq.family));
    row.push_back(cell_string(r.cell));
    row.emplace_back(to_string(r.status));
    row.push_back(r.witness.size() > 0 ? r.witness[0].get_str() : "");
    row.push_back(r.witness.size() > 1 ? r.witness[1].get_str() : "");
    if (r.certificate) {
      row.push_back(std::to_string(r.certificate->prime));
      row.push_back(std::to_string(r.certificate->valuation));
      row.push_back(std::to_string(r.certificate->forced_exponent));
      row.emplace_back(to_string(r.certificate->rule));
      row.push_back(certificate_id(*r.certificate) + ".json");
    } else {
      row.insert(row.end(), 5, "");
    }
    row.push_back(r.in_hypothesis_region ? "1" : "0");
    row.push_back(r.status == CellStatus::Degenerate ? "0" : small_decimal(r.left.reconstruct()));
    row.push_back(r.left.to_string());
    row.push_back(r.note);
    row.emplace_back(config_hash);
    out += csv_row(row);
  }
  return out;
}

Json summary_json(const SearchReport& report, const SearchTask& task, std::string_view config_hash) {
  Json j;
  j["task"] = canonical_task_json(task);
  j["task_hash"] = report.task_hash;
  j["config_hash"] = std::string(config_hash);
  const auto& t = report.totals;
  Json tot;
  tot["cells"] = t.cells;
  tot["SOLUTION"] = t.solution;
  tot["CERTIFIED"] = t.certified;
  tot["DEGENERATE"] = t.degenerate;
  tot["EXHAUSTED"] = t.exhausted;
  tot["UNKNOWN"] = t.unknown;
  j["totals"] = tot;
  j["unknown_fraction"] = t.unknown_fraction();
  Json sols = Json::array();
  for (const auto& r : report.records) {
    if (r.status != CellStatus::Solution) continue;
    Json s;
    s["cell"] = r.cell;
    s["witness"] = str_list(r.witness);
    sols.push_back(s);
  }
  j["solutions"] = sols;
  j["resumed_cells"] = report.resumed_cells;
  return j;
}

}  // namespace facteq::io
