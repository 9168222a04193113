#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "facteq/cli.hpp"
#include "facteq/parse.hpp"

using namespace facteq;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

std::vector<mpz_class> coeffs_of(const RightSide& r) {
  const auto c = std::get<BinaryForm>(r).coeffs();
  return {c.begin(), c.end()};
}

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("facteq_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("target grammar") {
  auto t = parse_target("x2+y2", TargetKind::Form);
  CHECK(coeffs_of(t.rhs) == std::vector<mpz_class>{1, 0, 1});
  t = parse_target("3x2y - xy2 + y3", TargetKind::Form);
  CHECK(coeffs_of(t.rhs) == std::vector<mpz_class>{0, 3, -1, 1});
  t = parse_target("x^2 - 1", TargetKind::Poly);
  CHECK(std::get<UnivariatePoly>(t.rhs).same_coefficients(UnivariatePoly::from_descending({1, 0, -1})));
  t = parse_target("1/2x2 + 1/2y2", TargetKind::Form);
  CHECK(t.scaling == 2);
  CHECK(coeffs_of(t.rhs) == std::vector<mpz_class>{1, 0, 1});
  CHECK_THROWS_AS(parse_target("x2+y", TargetKind::Form), InputError);   // not homogeneous
  CHECK_THROWS_AS(parse_target("x2+y2", TargetKind::Poly), InputError);  // y in a poly
  CHECK_THROWS_AS(parse_target("x5+y5", TargetKind::Form), InputError);  // use --coeffs
  CHECK_THROWS_AS(parse_target("x^^2", TargetKind::Poly), InputError);
  const auto c = parse_target_coeffs("[1,0,0,0,0,1]", TargetKind::Form);
  CHECK(std::get<BinaryForm>(c.rhs).degree() == 5);
  const auto fl = parse_factor_list("3*[1,0,1]^2*[1,-1]");
  CHECK(fl.unit == 3);
  REQUIRE(fl.entries.size() == 2);
  CHECK(fl.entries[0].multiplicity == 2);
  CHECK(parse_u64_list("1,2, 3") == std::vector<std::uint64_t>{1, 2, 3});
  CHECK_THROWS_AS(parse_u64_list("1,-2"), InputError);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kExitInput);
  CHECK(run({"nosuch"}).code == cli::kExitInput);
  CHECK(run({"search", "--form", "x2+y"}).code == cli::kExitInput);
  CHECK(run({"bounds", "--stirling", "100,0,0,1"}).code == cli::kExitInput);
  CHECK(run({"bounds", "--stirling", "5,0,0,1"}).code == cli::kExitOk);
  CHECK(run({"reproduce", "NOPE"}).code == cli::kExitInput);
  const auto r = run({"certify", "--family", "prod", "--dfact", "9", "--poly", "x^2"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("V_NOT_MULTIPLE") != std::string::npos);
  // 5! + 4! = 144 is a sum of two squares: no certificate.
  CHECK(run({"certify", "--family", "sum", "--n", "5", "--m", "4", "--form", "x2+y2"}).code == cli::kExitUnknown);
}

TEST_CASE("obstruct-scan output") {
  const auto r = run({"obstruct-scan", "--form", "x2+y2", "--from", "3", "--to", "100"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("prime,eligible,E,reason\r\n", 0) == 0);
  // One row per prime in range (24 odd primes below 100), 13 of them eligible.
  std::size_t rows = 0, eligible = 0;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    ++rows;
    if (line.find(",1,2,") != std::string::npos) ++eligible;
  }
  CHECK(rows == 1 + 24);
  CHECK(eligible == 13);
}

TEST_CASE("search writes deterministic outputs regardless of workers") {
  const auto d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  const auto a = run({"--workers", "1", "search", "--form", "x2+y2", "--nmax", "14", "--out", d1.string()});
  const auto b = run({"--workers", "3", "search", "--form", "x2+y2", "--nmax", "14", "--out", d2.string()});
  CHECK(a.code == b.code);
  CHECK(io::read_file(d1 / "report.csv") == io::read_file(d2 / "report.csv"));
  CHECK(io::read_file(d1 / "summary.json") == io::read_file(d2 / "summary.json"));
  CHECK_FALSE(fs::exists(d1 / "checkpoint.json"));
  CHECK(fs::is_directory(d1 / "certificates"));
  const auto rc = run({"recheck", (d1 / "certificates").string()});
  CHECK(rc.code == cli::kExitOk);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("config file with a [search] section") {
  const auto d = fresh_dir("cfg");
  const auto ref = fresh_dir("cfg_ref");
  {
    std::ofstream cfg(d / "run.ini");
    cfg << "workers = 2\n\n[search]\nform = \"x2+y2\"\nnmax = 12\nout = \"" << (d / "out").string() << "\"\n";
  }
  const auto a = run({"--config", (d / "run.ini").string(), "search"});
  const auto b = run({"search", "--form", "x2+y2", "--nmax", "12", "--out", ref.string()});
  CHECK(a.code == b.code);
  CHECK(io::read_file(d / "out" / "report.csv") == io::read_file(ref / "report.csv"));
  CHECK(run({"--config", (d / "missing.ini").string(), "search"}).code == cli::kExitInput);
  fs::remove_all(d);
  fs::remove_all(ref);
}

TEST_CASE("interrupted search resumes to identical output") {
  const auto full = fresh_dir("full"), part = fresh_dir("part");
  const auto f = run({"search", "--poly", "x^2", "--nmax", "20", "--out", full.string()});
  const auto cp = (part / "cp.json").string();
  const auto i1 = run({"search", "--poly", "x^2", "--nmax", "20", "--out", part.string(), "--checkpoint", cp,
                       "--checkpoint-interval", "4", "--stop-after", "37"});
  CHECK(i1.code == cli::kExitUnknown);
  CHECK(fs::exists(cp));
  const auto r = run({"search", "--poly", "x^2", "--nmax", "20", "--out", part.string(), "--checkpoint", cp});
  CHECK(r.code == f.code);
  CHECK(io::read_file(full / "report.csv") == io::read_file(part / "report.csv"));
  // A checkpoint from a different task is refused.
  const auto i2 = run({"search", "--poly", "x^2", "--nmax", "20", "--out", part.string(), "--checkpoint", cp,
                       "--keep-checkpoint", "--stop-after", "10"});
  CHECK(i2.code == cli::kExitUnknown);
  CHECK(run({"search", "--poly", "x^2", "--nmax", "21", "--out", part.string(), "--checkpoint", cp}).code ==
        cli::kExitInput);
  fs::remove_all(full);
  fs::remove_all(part);
}

TEST_CASE("recheck flags a tampered certificate") {
  const auto d = fresh_dir("tamper");
  REQUIRE(run({"certify", "--family", "prod", "--dfact", "9", "--poly", "x^2", "--out", (d / "c.json").string()})
              .code == cli::kExitOk);
  CHECK(run({"recheck", (d / "c.json").string()}).code == cli::kExitOk);
  auto j = io::Json::parse(io::read_file(d / "c.json"));
  j["valuation"] = 5;
  io::write_atomic(d / "bad.json", j.dump(2));
  CHECK(run({"recheck", (d / "bad.json").string()}).code == cli::kExitUnknown);
  CHECK(run({"recheck", (d / "none.json").string()}).code == cli::kExitInput);
  fs::remove_all(d);
}

TEST_CASE("presets reproduce their bundled solution sets") {
  for (const auto& name : cli::preset_names()) {
    const auto o = cli::run_preset(name);
    CHECK_MESSAGE(o.match, name);
    CHECK(o.report.totals.unknown == 0);
  }
  const auto d = fresh_dir("repro");
  CHECK(run({"reproduce", "BROCARD", "--out", d.string()}).code == cli::kExitOk);
  CHECK(fs::exists(d / "expected.json"));
  fs::remove_all(d);
}

TEST_CASE("bounds JSON has a stable layout") {
  const auto a = run({"bounds", "--poly", "x^2-1", "--epsilon", "1/4"});
  const auto b = run({"bounds", "--poly", "x^2-1", "--epsilon", "1/4"});
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"value\": 38135,") != std::string::npos);
  CHECK(run({"bounds", "--poly", "x^2"}).code == cli::kExitInput);
}
