#include "facteq/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>

#include "facteq/parse.hpp"

namespace facteq::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct TargetArgs {
  std::string form, poly, coeffs, target = "form", factors;
};

void add_target_options(CLI::App* cmd, TargetArgs& t) {
  cmd->add_option("--form", t.form, "binary form, e.g. x2+y2 or 3x2y-xy2+y3");
  cmd->add_option("--poly", t.poly, "polynomial in x, e.g. x^2-1");
  cmd->add_option("--coeffs", t.coeffs, "descending coefficient list, e.g. [1,0,1]");
  cmd->add_option("--target", t.target, "form|poly, for --coeffs")->check(CLI::IsMember({"form", "poly"}));
  cmd->add_option("--factors", t.factors, "declared factor list, e.g. [1,0,1]^2*[1,-1]");
}

ParsedTarget resolve_target(const TargetArgs& t) {
  const int given = !t.form.empty() + !t.poly.empty() + !t.coeffs.empty();
  if (given != 1) throw InputError("give exactly one of --form, --poly, --coeffs");
  ParsedTarget pt;
  if (!t.form.empty()) pt = parse_target(t.form, TargetKind::Form);
  else if (!t.poly.empty()) pt = parse_target(t.poly, TargetKind::Poly);
  else pt = parse_target_coeffs(t.coeffs, t.target == "poly" ? TargetKind::Poly : TargetKind::Form);
  if (!t.factors.empty()) {
    FactorList fl = parse_factor_list(t.factors);
    if (pt.scaling != 1) throw InputError("--factors needs integer coefficients");
    std::visit(
        [&](auto& f) {
          if (!verify_factor_list(f, fl)) throw InputError("declared factor list does not multiply out to the target");
          f.set_factor_list(std::move(fl));
        },
        pt.rhs);
  }
  return pt;
}

struct EquationArgs {
  std::string family = "sum";
  std::int64_t A = 1, B = 1, b = 1;
  std::string kind = "dfact";
};

void add_equation_options(CLI::App* cmd, EquationArgs& e) {
  cmd->add_option("--family", e.family, "sum | prod (or a full family name)");
  cmd->add_option("--A", e.A, "sum family: coefficient of n!");
  cmd->add_option("--B", e.B, "sum family: coefficient of m!");
  cmd->add_option("--b", e.b, "product family: constant factor");
  cmd->add_option("--kind", e.kind, "product family: fact | dfact")->check(CLI::IsMember({"fact", "dfact"}));
}

Equation resolve_equation(const EquationArgs& e, const ParsedTarget& pt) {
  Equation eq;
  const bool binary = std::holds_alternative<BinaryForm>(pt.rhs);
  bool sum;
  if (e.family == "sum") {
    sum = true;
  } else if (e.family == "prod") {
    sum = false;
  } else if (auto f = parse_family(e.family)) {
    eq.family = *f;
    if (eq.is_binary() != binary) throw InputError("family " + e.family + " does not match the target type");
    sum = eq.is_sum();
  } else {
    throw InputError("unknown family: " + e.family);
  }
  eq.family = sum ? (binary ? Family::SumFactBinary : Family::SumFactUni)
                  : (binary ? Family::ProdDfactBinary : Family::ProdDfactUni);
  eq.A = e.A;
  eq.B = e.B;
  eq.b = e.b;
  eq.kind = e.kind == "fact" ? FactorialKind::Factorial : FactorialKind::DoubleFactorial;
  eq.rhs = pt.rhs;
  eq.scaling = pt.scaling;
  eq.validate();
  return eq;
}

void apply_isa(const std::string& name) {
  if (name.empty() || name == "auto") {
    simd::force_isa(std::nullopt);
    return;
  }
  const auto isa = simd::parse_isa(name);
  if (!isa) throw InputError("unknown isa: " + name);
  simd::force_isa(*isa);
}

double num(long double v) { return static_cast<double>(v); }

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  io::write_atomic(path, content);
}

std::string cells_string(const std::vector<std::vector<std::uint64_t>>& cells) {
  std::string s = "{";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ", ";
    if (cells[i].size() == 1) {
      s += std::to_string(cells[i][0]);
      continue;
    }
    s += "(";
    for (std::size_t k = 0; k < cells[i].size(); ++k) s += (k ? "," : "") + std::to_string(cells[i][k]);
    s += ")";
  }
  return s + "}";
}

// ---- search ----

struct SearchArgs {
  TargetArgs target;
  EquationArgs eq;
  std::uint64_t nmin = 1, nmax = 0, mmin = 1, ball = 200, max_x_range = 50'000'000, lift_cap = 64;
  std::uint64_t prime_budget = 10'000, checkpoint_interval = 64, rho_iterations = 200'000, stop_after = 0;
  std::uint32_t arity = 1;
  bool diagonal = false, allow_infinite = false, keep_checkpoint = false;
  std::string out = "facteq_out", checkpoint;
};

int cmd_search(const SearchArgs& a, unsigned workers, std::ostream& out) {
  const auto pt = resolve_target(a.target);
  SearchTask task;
  task.equation = resolve_equation(a.eq, pt);
  task.n_min = a.nmin;
  task.n_max = a.nmax;
  task.m_min = a.mmin;
  task.arity = a.arity;
  task.include_diagonal = a.diagonal;
  task.allow_infinite = a.allow_infinite;
  task.ball = a.ball;
  task.max_x_range = a.max_x_range;
  task.certify.prime_budget = a.prime_budget;
  task.certify.valuation.lift_cap = a.lift_cap;
  task.factoring.rho_iterations = a.rho_iterations;
  task.workers = workers;
  task.checkpoint_interval = a.checkpoint_interval;
  if (a.stop_after) task.stop_after = a.stop_after;
  const fs::path dir(a.out);
  fs::create_directories(dir);
  task.checkpoint_path = a.checkpoint.empty() ? (dir / "checkpoint.json").string() : a.checkpoint;

  SearchReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    rep = run_search(task);
  } catch (const SearchInterrupted& e) {
    out << e.what() << "; checkpoint at " << task.checkpoint_path << "\n";
    return kExitUnknown;
  }
  write_search_outputs(dir, rep, task);
  if (!a.keep_checkpoint) fs::remove(task.checkpoint_path);
  const auto& t = rep.totals;
  out << "cells " << t.cells << "  SOLUTION " << t.solution << "  CERTIFIED " << t.certified << "  DEGENERATE "
      << t.degenerate << "  EXHAUSTED " << t.exhausted << "  UNKNOWN " << t.unknown << "\n";
  if (rep.resumed_cells) out << "resumed " << rep.resumed_cells << " cells from checkpoint\n";
  out << "task hash " << rep.task_hash << ", outputs in " << dir.string() << "\n";
  // runtime goes to the console only, so the files stay byte-identical
  out << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
  return t.unknown ? kExitUnknown : kExitOk;
}

// ---- certify ----

struct CertifyArgs {
  TargetArgs target;
  EquationArgs eq;
  std::uint64_t n = 0, m = 0, prime_budget = 10'000, lift_cap = 64;
  std::string dfact, fact, out;
};

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  const auto pt = resolve_target(a.target);
  EquationArgs ea = a.eq;
  std::vector<std::uint64_t> cell;
  if (!a.dfact.empty() || !a.fact.empty()) {
    if (!a.dfact.empty() && !a.fact.empty()) throw InputError("give --dfact or --fact, not both");
    if (ea.family == "sum") ea.family = "prod";
    ea.kind = a.fact.empty() ? "dfact" : "fact";
    cell = parse_u64_list(a.fact.empty() ? a.dfact : a.fact);
  } else {
    cell = {a.n, a.m};
  }
  const Equation eq = resolve_equation(ea, pt);
  eq.validate_cell(cell);
  CertifyOptions opts;
  opts.prime_budget = a.prime_budget;
  opts.valuation.lift_cap = a.lift_cap;
  const auto res = certify_cell(eq, cell, opts);
  Json j;
  if (res.certificate) {
    j = io::to_json(*res.certificate);
  } else {
    j["certified"] = false;
    j["zero_left_side"] = res.zero_left_side;
    j["primes_tried"] = res.primes_tried;
  }
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!a.out.empty()) write_file(a.out, text);
  return res.certificate ? kExitOk : kExitUnknown;
}

// ---- obstruct-scan ----

struct ScanArgs {
  TargetArgs target;
  std::uint64_t from = 2, to = 100;
  std::string out;
};

int cmd_scan(const ScanArgs& a, unsigned workers, std::ostream& out, std::ostream& err) {
  if (a.to < a.from) throw InputError("--to must be >= --from");
  if (a.to >= small_primes().limit()) throw InputError("--to must be below 2^20");
  const auto pt = resolve_target(a.target);
  const ProfileEngine engine(pt.rhs);
  const auto scan = scan_obstruction_primes(engine, a.from, a.to, workers);
  std::string csv = io::csv_row(std::vector<std::string>{"prime", "eligible", "E", "reason"});
  for (std::uint64_t q : small_primes().range(a.from, a.to)) {
    const auto p = engine.profile(q);
    const std::string reason =
        p.eligible ? std::string(to_string(p.reason)) : std::string(to_string(p.excluded));
    csv += io::csv_row(std::vector<std::string>{std::to_string(q), p.eligible ? "1" : "0",
                                                p.eligible ? std::to_string(p.forced_exponent) : "", reason});
  }
  if (a.out.empty()) out << csv;
  else write_file(a.out, csv);
  err << "eligible " << scan.eligible.size() << " of " << scan.primes_in_range << " primes, density "
      << scan.density << "\n";
  return kExitOk;
}

// ---- bounds ----

struct BoundsArgs {
  std::string poly, epsilon, stirling, out;
  double K = 1;
  std::int64_t b = 1;
  bool dbl = false;
  std::uint64_t radical = 0;
};

long double parse_ld(const std::string& s) {
  std::size_t used = 0;
  long double v = 0;
  try {
    v = std::stold(s, &used);
  } catch (const std::exception&) {
    throw InputError("bad number: " + s);
  }
  if (used != s.size()) throw InputError("bad number: " + s);
  return v;
}

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.poly.empty() && a.stirling.empty() && a.radical == 0) throw InputError("give --poly, --stirling or --radical");
  Json j;
  if (!a.stirling.empty()) {
    std::vector<long double> c;
    std::string s = a.stirling;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      c.push_back(parse_ld(s.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (c.size() != 4) throw InputError("--stirling takes A',B',C',E'");
    StirlingInequality st{c[0], c[1], c[2], c[3], a.dbl ? StirlingSide::Double : StirlingSide::Single};
    Json sj;
    sj["A"] = num(st.A);
    sj["B"] = num(st.B);
    sj["C"] = num(st.C);
    sj["E"] = num(st.E);
    sj["side"] = a.dbl ? "DOUBLE" : "SINGLE";
    sj["conditional"] = false;
    if (a.dbl) {
      Json fr = Json::array();
      for (const auto& [n1, m1] : stirling_frontier(st)) fr.push_back(Json::array({n1, m1}));
      sj["frontier"] = fr;
    } else {
      const auto r = stirling_bound(st);
      sj["m_max"] = r.m_max ? Json(*r.m_max) : Json(nullptr);
      sj["monotone_from"] = r.monotone_from;
      sj["margin"] = num(r.margin);
    }
    j["stirling"] = sj;
  }
  if (a.radical) {
    const auto r = radical_bound_factorial(a.radical);
    Json rj;
    rj["m"] = r.m;
    rj["log_radical"] = num(r.log_radical);
    rj["log_bound"] = num(r.log_bound);
    rj["holds"] = r.holds;
    rj["conditional"] = false;
    j["radical"] = rj;
  }
  if (!a.poly.empty()) {
    const auto pt = parse_target(a.poly, TargetKind::Poly);
    AbcParams params;
    params.K = a.K;
    params.b = a.b;
    if (!a.epsilon.empty()) {
      const auto q = parse_rational_list(a.epsilon);
      if (q.size() != 1) throw InputError("--epsilon takes one rational");
      params.epsilon = q[0];
    }
    if (pt.scaling != 1) throw InputError("bounds: give the polynomial with integer coefficients");
    j["pipeline"] = bound_report_json(conditional_bound_pipeline(std::get<UnivariatePoly>(pt.rhs), params));
  }
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!a.out.empty()) write_file(a.out, text);
  return kExitOk;
}

// ---- reproduce / recheck ----

int cmd_reproduce(const std::string& name, const std::string& dir, unsigned workers, std::ostream& out) {
  const auto o = run_preset(name, workers);
  if (!dir.empty()) {
    write_search_outputs(dir, o.report, o.preset.task);
    Json e;
    e["preset"] = o.preset.name;
    e["expected"] = o.preset.expected;
    e["found"] = o.found;
    e["match"] = o.match;
    write_file(fs::path(dir) / "expected.json", e.dump(2) + "\n");
  }
  out << o.preset.name << ": " << o.preset.description << "\n";
  out << "  found    " << cells_string(o.found) << "\n";
  out << "  expected " << cells_string(o.preset.expected) << "\n";
  out << "  " << (o.match ? "MATCH" : "MISMATCH") << ", " << o.report.totals.cells << " cells, UNKNOWN "
      << o.report.totals.unknown << ", " << o.seconds << " s\n";
  return o.match && o.report.totals.unknown == 0 ? kExitOk : kExitUnknown;
}

int cmd_recheck(const std::vector<std::string>& paths, std::ostream& out) {
  if (paths.empty()) throw InputError("recheck needs certificate files or directories");
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".json") files.push_back(e.path());
    } else {
      files.emplace_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no certificate files found");
  std::size_t bad = 0;
  for (const auto& f : files) {
    Certificate c;
    try {
      c = io::certificate_from_json(Json::parse(io::read_file(f)));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(f.string() + ": " + e.what());
    } catch (const DataError& e) {
      throw InputError(f.string() + ": " + e.what());
    }
    const auto r = recheck(c);
    out << f.filename().string() << ": " << (r.ok ? "OK" : "FAIL " + r.reason);
    if (r.ok) {
      out << (r.big_integer_valuation ? " [big-integer valuation]" : "")
          << (r.exhaustive_profile ? " [exhaustive profile]" : "");
    }
    out << "\n";
    bad += !r.ok;
  }
  out << files.size() - bad << " of " << files.size() << " certificates verified\n";
  return bad ? kExitUnknown : kExitOk;
}

std::vector<std::vector<std::uint64_t>> solution_cells(const SearchReport& rep, bool single) {
  std::vector<std::vector<std::uint64_t>> out;
  for (const auto& r : rep.records) {
    if (r.status != CellStatus::Solution) continue;
    out.push_back(single ? std::vector<std::uint64_t>{r.cell[0]} : r.cell);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::string> preset_names() { return {"BROCARD", "ERDOS_OBLATH", "DOUBLE_FACT_SQUARES"}; }

Preset make_preset(std::string_view name) {
  Preset p;
  p.name = std::string(name);
  auto& t = p.task;
  if (name == "BROCARD") {
    // n! + 1 = x^2, i.e. n! = x^2 - 1.
    t.equation.family = Family::ProdDfactUni;
    t.equation.kind = FactorialKind::Factorial;
    t.equation.b = 1;
    t.equation.rhs = UnivariatePoly::from_descending({1, 0, -1});
    t.n_min = 1;
    t.n_max = 500;
    p.expected = {{4}, {5}, {7}};
    p.description = "n! + 1 = x^2, 1 <= n <= 500";
  } else if (name == "ERDOS_OBLATH") {
    t.equation.family = Family::SumFactUni;
    t.equation.A = 1;
    t.equation.B = 1;
    t.equation.rhs = UnivariatePoly::from_descending({1, 0, 0});
    t.n_min = 2;
    t.n_max = 30;
    t.m_min = 1;
    p.expected = {{4, 1}, {5, 1}, {5, 4}, {7, 1}};
    p.description = "n! + m! = x^2, 0 < m < n <= 30";
  } else if (name == "DOUBLE_FACT_SQUARES") {
    t.equation.family = Family::ProdDfactUni;
    t.equation.kind = FactorialKind::DoubleFactorial;
    t.equation.b = 1;
    t.equation.rhs = UnivariatePoly::from_descending({1, 0, 0});
    t.n_min = 0;
    t.n_max = 100;
    p.expected = {{0}, {1}};
    p.description = "n!! = x^2, 0 <= n <= 100";
  } else {
    throw InputError("unknown preset: " + std::string(name));
  }
  return p;
}

PresetOutcome run_preset(std::string_view name, unsigned workers) {
  PresetOutcome o;
  o.preset = make_preset(name);
  o.preset.task.workers = workers;
  const auto t0 = std::chrono::steady_clock::now();
  o.report = run_search(o.preset.task);
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.found = solution_cells(o.report, !o.preset.task.equation.is_sum());
  auto expected = o.preset.expected;
  std::sort(expected.begin(), expected.end());
  o.match = o.found == expected;
  return o;
}

void write_search_outputs(const fs::path& dir, const SearchReport& report, const SearchTask& task) {
  fs::create_directories(dir / "certificates");
  const std::string hash = report.task_hash;
  write_file(dir / "report.csv", io::report_csv(report, task.equation, hash));
  write_file(dir / "summary.json", io::summary_json(report, task, hash).dump(2) + "\n");
  for (const auto& r : report.records) {
    if (!r.certificate) continue;
    write_file(dir / "certificates" / (io::certificate_id(*r.certificate) + ".json"),
               io::to_json(*r.certificate).dump(2) + "\n");
  }
}

Json bound_report_json(const BoundReport& rep) {
  Json j;
  j["poly"] = rep.poly;
  j["degree"] = rep.degree;
  j["epsilon"] = rep.epsilon.get_str();
  j["K"] = num(rep.K);
  j["depressed"] = rep.depressed;
  j["c"] = rep.c.get_str();
  j["j"] = rep.j;
  j["R1"] = rep.r1;
  j["exponent"] = num(rep.exponent);
  Json hyp;
  hyp["monomial_original"] = rep.monomial_original;
  hyp["monomial_after_depression"] = rep.monomial_depressed;
  hyp["distinct_roots"] = rep.distinct_roots;
  j["hypothesis"] = hyp;
  Json cs = Json::array();
  for (const auto& c : rep.constants) {
    Json cj;
    cj["name"] = c.name;
    cj["value"] = num(c.value);
    cj["conditional"] = c.conditional;
    cj["provenance"] = c.provenance;
    cs.push_back(cj);
  }
  j["constants"] = cs;
  Json mj;
  mj["value"] = rep.m_max;
  mj["n_max"] = 2 * rep.m_max + 1;
  mj["conditional"] = true;
  j["m_max"] = mj;
  Json zj;
  zj["value"] = num(rep.log_z_max);
  zj["conditional"] = true;
  j["log_z_max"] = zj;
  Json rs = Json::array();
  for (const auto& r : rep.radical_checks) {
    Json rj;
    rj["m"] = r.m;
    rj["log_radical"] = num(r.log_radical);
    rj["log_bound"] = num(r.log_bound);
    rj["holds"] = r.holds;
    rj["conditional"] = false;
    rs.push_back(rj);
  }
  j["radical_checks"] = rs;
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"facteq: factorial equations against binary forms and polynomials"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key/value config file with [subcommand] sections");
  unsigned workers = 1;
  std::string isa = "auto";
  app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--isa", isa, "auto | scalar | avx2");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "classify every cell of a range");
  add_target_options(search, sa.target);
  add_equation_options(search, sa.eq);
  search->add_option("--nmin", sa.nmin, "smallest n");
  search->add_option("--nmax", sa.nmax, "largest n")->required();
  search->add_option("--mmin", sa.mmin, "sum family: smallest m");
  search->add_option("--arity", sa.arity, "product family: number of factorials");
  search->add_flag("--diagonal", sa.diagonal, "sum family: include n = m");
  search->add_flag("--allow-infinite", sa.allow_infinite, "run product ranges that may have infinitely many solutions");
  search->add_option("--prime-budget", sa.prime_budget, "primes tried per cell");
  search->add_option("--ball", sa.ball, "general form search radius");
  search->add_option("--max-x-range", sa.max_x_range, "definite form enumeration cap");
  search->add_option("--lift-cap", sa.lift_cap, "valuation lifting cap");
  search->add_option("--rho-iterations", sa.rho_iterations, "Pollard rho iterations per attempt");
  search->add_option("--out", sa.out, "output directory");
  search->add_option("--checkpoint", sa.checkpoint, "checkpoint file (default OUT/checkpoint.json)");
  search->add_option("--checkpoint-interval", sa.checkpoint_interval, "cells per checkpoint");
  search->add_flag("--keep-checkpoint", sa.keep_checkpoint, "keep the checkpoint after completion");
  search->add_option("--stop-after", sa.stop_after, "stop after this many cells (testing)")->group("");

  CertifyArgs ca;
  auto* certify = app.add_subcommand("certify", "look for an obstruction certificate for one cell");
  add_target_options(certify, ca.target);
  add_equation_options(certify, ca.eq);
  certify->add_option("--n", ca.n, "sum family: n");
  certify->add_option("--m", ca.m, "sum family: m");
  certify->add_option("--dfact", ca.dfact, "product family: n_1,...,n_r of double factorials");
  certify->add_option("--fact", ca.fact, "product family: n_1,...,n_r of factorials");
  certify->add_option("--prime-budget", ca.prime_budget, "primes tried");
  certify->add_option("--lift-cap", ca.lift_cap, "valuation lifting cap");
  certify->add_option("--out", ca.out, "write the certificate here too");

  ScanArgs oa;
  auto* scan = app.add_subcommand("obstruct-scan", "list obstruction primes in a range");
  add_target_options(scan, oa.target);
  scan->add_option("--from", oa.from, "smallest prime");
  scan->add_option("--to", oa.to, "largest prime");
  scan->add_option("--out", oa.out, "CSV file (default stdout)");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Stirling, radical and conditional bounds");
  bounds->add_option("--poly", ba.poly, "polynomial for the conditional pipeline");
  bounds->add_option("--epsilon", ba.epsilon, "epsilon (rational), default 1/(2d)");
  bounds->add_option("--K", ba.K, "K(epsilon), assumed");
  bounds->add_option("--b", ba.b, "constant of the equation b n!! = f(x)");
  bounds->add_option("--stirling", ba.stirling, "A',B',C',E'");
  bounds->add_flag("--double", ba.dbl, "two-variable Stirling frontier");
  bounds->add_option("--radical", ba.radical, "compare log rad((2m+1)!) with (2m+1) log 4 at this m");
  bounds->add_option("--out", ba.out, "JSON file (also printed)");

  std::string preset, rdir;
  auto* reproduce = app.add_subcommand("reproduce", "run a bundled preset and diff against expected output");
  reproduce->add_option("preset", preset, "BROCARD | ERDOS_OBLATH | DOUBLE_FACT_SQUARES")->required();
  reproduce->add_option("--out", rdir, "output directory");

  std::vector<std::string> paths;
  auto* rc = app.add_subcommand("recheck", "verify certificate files independently");
  rc->add_option("paths", paths, "certificate files or directories")->required();

  std::vector<std::string> argv_store{"facteq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    apply_isa(isa);
    if (*search) return cmd_search(sa, workers, out);
    if (*certify) return cmd_certify(ca, out);
    if (*scan) return cmd_scan(oa, workers, out, err);
    if (*bounds) return cmd_bounds(ba, out);
    if (*reproduce) return cmd_reproduce(preset, rdir, workers, out);
    if (*rc) return cmd_recheck(paths, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ResourceError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitUnknown;
  }
  return kExitInput;
}

}  // namespace facteq::cli
