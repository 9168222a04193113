#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "facteq/io.hpp"

using namespace facteq;
namespace fs = std::filesystem;

namespace {

SearchTask small_task() {
  SearchTask t;
  t.equation.family = Family::SumFactBinary;
  t.equation.rhs = BinaryForm({1, 0, 1});
  t.n_min = 2;
  t.n_max = 10;
  return t;
}

std::vector<std::string> keys(const io::Json& j) {
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
  return out;
}

}  // namespace

TEST_CASE("RFC 4180 quoting") {
  CHECK(io::csv_field("plain") == "plain");
  CHECK(io::csv_field("a,b") == "\"a,b\"");
  CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(io::csv_field("") == "");
  const std::vector<std::string> row = {"a", "b,c", "d"};
  CHECK(io::csv_row(row) == "a,\"b,c\",d\r\n");
}

TEST_CASE("fnv1a reference values") {
  // Published FNV-1a 64-bit test vectors.
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(io::hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("small_decimal") {
  CHECK(io::small_decimal(-42) == "-42");
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 41);
  CHECK(io::small_decimal(big).empty());
}

TEST_CASE("sketch and factor list round trip") {
  const auto sk = factor(mpz_class(-720));
  const auto back = io::sketch_from_json(io::to_json(sk));
  CHECK(back.reconstruct() == -720);
  FactorList fl;
  fl.unit = 3;
  fl.entries = {{{1, 0, 1}, 2}, {{1, -1}, 1}};
  fl.declared = true;
  const auto fb = io::factor_list_from_json(io::to_json(fl));
  CHECK(fb.unit == 3);
  REQUIRE(fb.entries.size() == 2);
  CHECK(fb.entries[0].coeffs == fl.entries[0].coeffs);
  CHECK(fb.entries[0].multiplicity == 2);
}

TEST_CASE("certificates round trip with a stable key order") {
  Equation eq;
  eq.family = Family::SumFactBinary;
  eq.rhs = BinaryForm({1, 0, 1});
  const std::uint64_t cell[] = {7, 3};
  const auto out = certify_cell(eq, cell);
  REQUIRE(out.certificate);
  const auto j = io::to_json(*out.certificate);
  const auto k = keys(j);
  REQUIRE(k.size() >= 8);
  CHECK(k[0] == "family");
  CHECK(std::find(k.begin(), k.end(), "checker_version") != k.end());
  const auto back = io::certificate_from_json(j);
  CHECK(io::to_json(back).dump() == j.dump());
  CHECK(recheck(back).ok);
  CHECK(io::certificate_id(back) == io::certificate_id(*out.certificate));
  // Dumping twice gives identical bytes.
  CHECK(io::to_json(*out.certificate).dump(2) == j.dump(2));
}

TEST_CASE("records round trip") {
  auto t = small_task();
  const auto rep = run_search(t);
  for (const auto& r : rep.records) {
    const auto j = io::to_json(r);
    const auto b = io::record_from_json(j);
    CHECK(b.cell == r.cell);
    CHECK(b.status == r.status);
    CHECK(b.witness == r.witness);
    CHECK(b.certificate.has_value() == r.certificate.has_value());
    CHECK(b.left.reconstruct() == r.left.reconstruct());
    CHECK(io::to_json(b).dump() == j.dump());
  }
}

TEST_CASE("task hash ignores run-only settings") {
  auto a = small_task();
  auto b = a;
  b.workers = 7;
  b.checkpoint_path = "/tmp/elsewhere.json";
  b.stop_after = 3;
  CHECK(io::task_hash(a) == io::task_hash(b));
  b.n_max = 11;
  CHECK(io::task_hash(a) != io::task_hash(b));
  auto c = a;
  c.equation.rhs = BinaryForm({1, 0, 2});
  CHECK(io::task_hash(a) != io::task_hash(c));
  CHECK(io::task_hash(a).size() == 16);
}

TEST_CASE("checkpoint write, load and atomic replace") {
  const fs::path dir = fs::temp_directory_path() / "facteq_test_io";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto t = small_task();
  const auto rep = run_search(t);
  const auto path = dir / "cp.json";
  io::write_atomic(path, io::checkpoint_json(rep.task_hash, rep.records).dump());
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
  const auto cp = io::load_checkpoint(path);
  CHECK(cp.task_hash == rep.task_hash);
  CHECK(cp.records.size() == rep.records.size());
  io::write_atomic(path, "{}");
  CHECK(io::read_file(path) == "{}");
  CHECK_THROWS(io::load_checkpoint(path));
  {
    std::ofstream(dir / "trunc.json") << "{\"version\": 1, \"task_ha";
  }
  CHECK_THROWS(io::load_checkpoint(dir / "trunc.json"));
  CHECK_THROWS(io::read_file(dir / "missing.json"));
  fs::remove_all(dir);
}

TEST_CASE("report csv and summary") {
  const auto t = small_task();
  const auto rep = run_search(t);
  const auto csv = io::report_csv(rep, t.equation, rep.task_hash);
  CHECK(csv.rfind("family,cell,status,", 0) == 0);
  std::size_t lines = 0;
  for (std::size_t i = 0; i + 1 < csv.size(); ++i)
    if (csv[i] == '\r' && csv[i + 1] == '\n') ++lines;
  CHECK(lines == rep.records.size() + 1);
  CHECK(csv == io::report_csv(rep, t.equation, rep.task_hash));
  const auto s = io::summary_json(rep, t, rep.task_hash);
  CHECK(keys(s).front() == "task");
  CHECK(s["totals"]["cells"] == rep.totals.cells);
}
