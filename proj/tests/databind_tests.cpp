#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "exeos/ampl/parser.hpp"
#include "exeos/databind/bind.hpp"
#include "exeos/databind/manifest.hpp"
#include "exeos/databind/tables.hpp"
#include "test_util.hpp"

using namespace exeos;
using namespace exeos::databind;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  auto dir = std::filesystem::temp_directory_path() / "exeos_databind_tests";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

std::vector<std::string> fig3_table_paths() {
  return {testutil::fixture("bundles/fig3/tables/products.csv"),
          testutil::fixture("bundles/fig3/tables/resources.csv"),
          testutil::fixture("bundles/fig3/tables/usage.csv")};
}

llm::SymbolMeta param_meta(std::string name, llm::Dimension dim) {
  llm::SymbolMeta m;
  m.name = std::move(name);
  m.dimension = dim;
  m.kind = llm::SymbolKind::Parameter;
  m.description = "test";
  return m;
}

std::vector<llm::SymbolMeta> fig3_meta() {
  return {
      param_meta("price", llm::Dimension::OneDimensional),
      param_meta("inventory", llm::Dimension::OneDimensional),
      param_meta("hold", llm::Dimension::OneDimensional),
      param_meta("buyCost", llm::Dimension::OneDimensional),
      param_meta("unit", llm::Dimension::TwoDimensional),
      param_meta("budget", llm::Dimension::Scalar),
  };
}

BoundData fig3_bound() {
  auto tables = load_tables(fig3_table_paths());
  REQUIRE(tables.ok());
  auto manifest =
      load_manifest(testutil::fixture("bundles/fig3/binding.manifest"));
  REQUIRE(manifest.ok());
  auto bound = databind::bind(*manifest, fig3_meta(), *tables);
  REQUIRE(bound.ok());
  return *bound;
}

}  // namespace

TEST_CASE("load_csv: typed columns and row order") {
  auto table = load_csv(testutil::fixture("bundles/fig3/tables/resources.csv"));
  REQUIRE(table.ok());
  CHECK(table->name == "resources");
  CHECK(table->columns.size() == 4);
  CHECK(table->rows() == 3);
  const Column* resource = table->find_column("resource");
  REQUIRE(resource != nullptr);
  CHECK_FALSE(resource->numeric);
  CHECK(resource->cells == std::vector<std::string>{"R1", "R2", "R3"});
  const Column* hold = table->find_column("hold");
  REQUIRE(hold != nullptr);
  CHECK(hold->numeric);
  CHECK(hold->cells == std::vector<std::string>{"10", "0", "10"});
  CHECK(table->find_column("nope") == nullptr);
}

TEST_CASE("load_csv: quoting, trimming, CRLF") {
  auto path = write_temp("quoted.csv",
                         "name, note\r\n"
                         "A, plain \r\n"
                         "\"B,C\",\"says \"\"hi\"\"\"\r\n");
  auto table = load_csv(path);
  REQUIRE(table.ok());
  CHECK(table->columns[0].name == "name");
  CHECK(table->columns[1].name == "note");
  CHECK(table->columns[0].cells == std::vector<std::string>{"A", "B,C"});
  CHECK(table->columns[1].cells ==
        std::vector<std::string>{"plain", "says \"hi\""});
}

TEST_CASE("load_csv: error taxonomy") {
  SUBCASE("missing file") {
    auto r = load_csv("/nonexistent/path/t.csv");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == IngestErrorKind::MissingFile);
  }
  SUBCASE("ragged row carries its line number") {
    auto r = load_csv(write_temp("ragged.csv", "a,b\n1,2\n3\n"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == IngestErrorKind::RaggedRow);
    CHECK(r.error().line == 3);
    CHECK(r.error().describe().find("ragged-row") != std::string::npos);
  }
  SUBCASE("header-only file") {
    auto r = load_csv(write_temp("headeronly.csv", "a,b\n"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == IngestErrorKind::EmptyTable);
  }
  SUBCASE("empty file") {
    auto r = load_csv(write_temp("empty.csv", ""));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == IngestErrorKind::EmptyTable);
  }
  SUBCASE("load_tables propagates the first failure") {
    auto r = load_tables({testutil::fixture("bundles/fig3/tables/products.csv"),
                          "/nonexistent/path/t.csv"});
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == IngestErrorKind::MissingFile);
  }
}

TEST_CASE("manifest: full example parses") {
  auto manifest =
      load_manifest(testutil::fixture("bundles/fig3/binding.manifest"));
  REQUIRE(manifest.ok());
  CHECK(manifest->sets.size() == 2);
  CHECK(manifest->params.size() == 6);
  const SetEntry* products = manifest->find_set("PRODUCTS");
  REQUIRE(products != nullptr);
  CHECK_FALSE(products->is_inline());
  CHECK(products->table == "products");
  CHECK(products->column == "product");
  const ParamEntry* unit = manifest->find_param("unit");
  REQUIRE(unit != nullptr);
  CHECK(unit->arity() == 2);
  CHECK(unit->key_columns == std::vector<std::string>{"resource", "product"});
  CHECK(unit->index_sets == std::vector<std::string>{"RESOURCES", "PRODUCTS"});
  const ParamEntry* budget = manifest->find_param("budget");
  REQUIRE(budget != nullptr);
  CHECK(budget->is_inline());
  CHECK(budget->arity() == 0);
  CHECK(budget->inline_scalar == 10.0);
}

TEST_CASE("manifest: inline forms and comments") {
  auto m = parse_manifest(
      "# demo\n"
      "[set S]\n"
      "members = A B C  # trailing comment\n"
      "[param cost]\n"
      "index_sets = S\n"
      "values = A 1.5, B -2, C 0\n"
      "default = 0\n");
  REQUIRE(m.ok());
  CHECK(m->sets[0].members == std::vector<std::string>{"A", "B", "C"});
  const ParamEntry& cost = m->params[0];
  CHECK(cost.is_inline());
  CHECK(cost.inline_rows.size() == 3);
  CHECK(cost.inline_rows[1] == std::vector<std::string>{"B", "-2"});
  CHECK(cost.has_default);
}

TEST_CASE("manifest: rejections") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    auto m = parse_manifest(text);
    REQUIRE_FALSE(m.ok());
    INFO(m.error().describe());
    CHECK(m.error().describe().find(needle) != std::string::npos);
  };
  expect_error("[set S]\nmembers = A\n[set S]\nmembers = B\n", "duplicate");
  expect_error("[param p]\nvalue = 1\ncolor = red\n", "unknown key");
  expect_error("key = value\n", "before any section");
  expect_error("[weird S]\nmembers = A\n", "must be [set NAME] or [param NAME]");
  expect_error("[param p]\nvalue = ten\n", "must be a number");
  expect_error(
      "[param p]\ntable = t\nkey_columns = a\nvalue_column = v\n",
      "1 key column(s) but 0 index set(s)");
  expect_error(
      "[param p]\ntable = t\nkey_columns = a, b\nvalue_column = v\n"
      "index_sets = S\n",
      "2 key column(s) but 1 index set(s)");
  expect_error("[param p]\nvalue = 1\nindex_sets = S\n", "not allowed");
  expect_error("[param p]\nindex_sets = S\nvalues = A\n", "2 token(s)");
  expect_error("[param p]\nvalue = 1\nvalues = A 1\n", "both");
  expect_error("[param p]\ndefault = 1\n", "no value source");
  expect_error("[set S]\nmembers = A\ntable = t\ncolumn = c\n",
               "either `members` or `table`+`column`");
}

TEST_CASE("bind: production tables reproduce the data document") {
  BoundData bound = fig3_bound();

  // Same values, same member order as the reference .dat document.
  auto expected =
      ampl::parse_data(testutil::read_file(testutil::fixture("fig3/data.dat")));
  REQUIRE(expected.ok());
  CHECK(to_data_section(bound) == *expected);

  const BoundSet* products = bound.find_set("PRODUCTS");
  REQUIRE(products != nullptr);
  CHECK(products->members == std::vector<std::string>{"A", "B"});
  const BoundSet* resources = bound.find_set("RESOURCES");
  REQUIRE(resources != nullptr);
  CHECK(resources->members == std::vector<std::string>{"R1", "R2", "R3"});

  const BoundParam* unit = bound.find_param("unit");
  REQUIRE(unit != nullptr);
  CHECK(unit->arity == 2);
  const double* r2b = unit->two_d.at("R2", "B");
  REQUIRE(r2b != nullptr);
  CHECK(*r2b == 2.0);
  CHECK(unit->provenance == "table usage, column amount");

  const BoundParam* budget = bound.find_param("budget");
  REQUIRE(budget != nullptr);
  CHECK(budget->scalar == 10.0);
  CHECK(budget->provenance == "inline scalar");

  // Deduplicated set from a fact-table column: usage.resource repeats keys.
  auto m = parse_manifest(
      "[set RESOURCES]\ntable = usage\ncolumn = resource\n");
  REQUIRE(m.ok());
  auto tables = load_tables(fig3_table_paths());
  auto dedup = databind::bind(*m, {}, *tables);
  REQUIRE(dedup.ok());
  CHECK(dedup->sets[0].members == std::vector<std::string>{"R1", "R2", "R3"});
}

TEST_CASE("bind: error taxonomy") {
  auto tables = load_tables(fig3_table_paths());
  REQUIRE(tables.ok());
  auto manifest =
      load_manifest(testutil::fixture("bundles/fig3/binding.manifest"));
  REQUIRE(manifest.ok());

  SUBCASE("unknown parameter") {
    auto meta = fig3_meta();
    meta.erase(meta.begin());  // drop price
    auto r = databind::bind(*manifest, meta, *tables);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == BindErrorKind::UnknownParameter);
    CHECK(r.error().symbol == "price");
  }
  SUBCASE("variable metadata does not satisfy a parameter binding") {
    auto meta = fig3_meta();
    meta[0].kind = llm::SymbolKind::Variable;
    auto r = databind::bind(*manifest, meta, *tables);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == BindErrorKind::UnknownParameter);
  }
  SUBCASE("2-D parameter bound with one key column") {
    auto m = parse_manifest(
        "[set RESOURCES]\ntable = resources\ncolumn = resource\n"
        "[param unit]\ntable = usage\nkey_columns = resource\n"
        "value_column = amount\nindex_sets = RESOURCES\n");
    REQUIRE(m.ok());
    auto r = databind::bind(*m, {param_meta("unit", llm::Dimension::TwoDimensional)},
                  *tables);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == BindErrorKind::ArityMismatch);
    CHECK(r.error().message.find("two-dimensional") != std::string::npos);
  }
  SUBCASE("duplicate key tuple") {
    auto path = write_temp("dup_usage.csv",
                           "resource,product,amount\nR1,A,1\nR1,A,2\n");
    auto m = parse_manifest(
        "[set RESOURCES]\nmembers = R1\n"
        "[set PRODUCTS]\nmembers = A\n"
        "[param unit]\ntable = dup_usage\nkey_columns = resource, product\n"
        "value_column = amount\nindex_sets = RESOURCES, PRODUCTS\n");
    REQUIRE(m.ok());
    auto t = load_tables({path});
    REQUIRE(t.ok());
    auto r = databind::bind(*m, {param_meta("unit", llm::Dimension::TwoDimensional)}, *t);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == BindErrorKind::DuplicateKey);
    CHECK(r.error().message.find("(R1, A)") != std::string::npos);
  }
  SUBCASE("missing member value without a default") {
    auto path = write_temp("sparse.csv", "k,v\nA,1\n");
    auto m = parse_manifest(
        "[set S]\nmembers = A B\n"
        "[param p]\ntable = sparse\nkey_columns = k\nvalue_column = v\n"
        "index_sets = S\n");
    REQUIRE(m.ok());
    auto t = load_tables({path});
    REQUIRE(t.ok());
    auto r = databind::bind(*m, {param_meta("p", llm::Dimension::OneDimensional)}, *t);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == BindErrorKind::MissingMemberValue);
    CHECK(r.error().message.find("`B`") != std::string::npos);
  }
  SUBCASE("default fills the gap") {
    auto path = write_temp("sparse2.csv", "k,v\nA,1\n");
    auto m = parse_manifest(
        "[set S]\nmembers = A B\n"
        "[param p]\ntable = sparse2\nkey_columns = k\nvalue_column = v\n"
        "index_sets = S\ndefault = -3\n");
    REQUIRE(m.ok());
    auto t = load_tables({path});
    REQUIRE(t.ok());
    auto r = databind::bind(*m, {param_meta("p", llm::Dimension::OneDimensional)}, *t);
    REQUIRE(r.ok());
    CHECK(r->params[0].one_d ==
          std::vector<std::pair<std::string, double>>{{"A", 1.0}, {"B", -3.0}});
  }
  SUBCASE("symbolic cell bound to a numeric parameter is never coerced") {
    auto path = write_temp("symbolic.csv", "k,v\nA,1\nB,n/a\n");
    auto m = parse_manifest(
        "[set S]\nmembers = A B\n"
        "[param p]\ntable = symbolic\nkey_columns = k\nvalue_column = v\n"
        "index_sets = S\ndefault = 0\n");
    REQUIRE(m.ok());
    auto t = load_tables({path});
    REQUIRE(t.ok());
    auto r = databind::bind(*m, {param_meta("p", llm::Dimension::OneDimensional)}, *t);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == BindErrorKind::SymbolicValue);
    CHECK(r.error().message.find("n/a") != std::string::npos);
  }
  SUBCASE("key outside the index set") {
    auto path = write_temp("stray.csv", "k,v\nA,1\nZ,2\n");
    auto m = parse_manifest(
        "[set S]\nmembers = A\n"
        "[param p]\ntable = stray\nkey_columns = k\nvalue_column = v\n"
        "index_sets = S\n");
    REQUIRE(m.ok());
    auto t = load_tables({path});
    REQUIRE(t.ok());
    auto r = databind::bind(*m, {param_meta("p", llm::Dimension::OneDimensional)}, *t);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == BindErrorKind::UnknownSymbol);
    CHECK(r.error().message.find("`Z`") != std::string::npos);
  }
  SUBCASE("unresolved table and column names") {
    auto m1 = parse_manifest(
        "[set S]\ntable = nope\ncolumn = k\n");
    auto r1 = databind::bind(*m1, {}, *tables);
    REQUIRE_FALSE(r1.ok());
    CHECK(r1.error().kind == BindErrorKind::UnknownSymbol);

    auto m2 = parse_manifest(
        "[set S]\ntable = products\ncolumn = nope\n");
    auto r2 = databind::bind(*m2, {}, *tables);
    REQUIRE_FALSE(r2.ok());
    CHECK(r2.error().kind == BindErrorKind::UnknownSymbol);

    auto m3 = parse_manifest(
        "[set PRODUCTS]\ntable = products\ncolumn = product\n"
        "[param price]\ntable = products\nkey_columns = product\n"
        "value_column = nope\nindex_sets = PRODUCTS\n");
    auto r3 = databind::bind(*m3, {param_meta("price", llm::Dimension::OneDimensional)},
                   *tables);
    REQUIRE_FALSE(r3.ok());
    CHECK(r3.error().kind == BindErrorKind::UnknownSymbol);
  }
  SUBCASE("unknown index set") {
    auto m = parse_manifest(
        "[param p]\nindex_sets = GHOST\nvalues = A 1\n");
    REQUIRE(m.ok());
    auto r = databind::bind(*m, {param_meta("p", llm::Dimension::OneDimensional)},
                  *tables);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == BindErrorKind::UnknownSymbol);
    CHECK(r.error().message.find("GHOST") != std::string::npos);
  }
  SUBCASE("scalar bound to a single-row table column") {
    auto path = write_temp("totals.csv", "label,amount\ngrand,42.5\n");
    auto m = parse_manifest(
        "[param budget]\ntable = totals\nvalue_column = amount\n");
    REQUIRE(m.ok());
    auto t = load_tables({path});
    REQUIRE(t.ok());
    auto r = databind::bind(*m, {param_meta("budget", llm::Dimension::Scalar)}, *t);
    REQUIRE(r.ok());
    CHECK(r->params[0].scalar == doctest::Approx(42.5));
    CHECK(r->params[0].provenance == "table totals, column amount");

    // Two rows is ambiguous, not an implicit aggregate.
    auto path2 = write_temp("totals2.csv", "label,amount\na,1\nb,2\n");
    auto t2 = load_tables({path, path2});
    REQUIRE(t2.ok());
    auto m2 = parse_manifest(
        "[param budget]\ntable = totals2\nvalue_column = amount\n");
    REQUIRE(m2.ok());
    auto r2 = databind::bind(*m2, {param_meta("budget", llm::Dimension::Scalar)}, *t2);
    REQUIRE_FALSE(r2.ok());
    CHECK(r2.error().kind == BindErrorKind::DuplicateKey);
  }
}

TEST_CASE("meta_from_manifest mirrors entry arities") {
  auto manifest =
      load_manifest(testutil::fixture("bundles/fig3/binding.manifest"));
  REQUIRE(manifest.ok());
  auto meta = meta_from_manifest(*manifest);
  REQUIRE(meta.size() == 6);
  CHECK(meta[0].name == "price");
  CHECK(meta[0].dimension == llm::Dimension::OneDimensional);
  CHECK(meta[4].name == "unit");
  CHECK(meta[4].dimension == llm::Dimension::TwoDimensional);
  CHECK(meta[5].name == "budget");
  CHECK(meta[5].dimension == llm::Dimension::Scalar);
  // Self-consistency: the derived metadata always satisfies its own manifest.
  auto tables = load_tables(fig3_table_paths());
  CHECK(databind::bind(*manifest, meta, *tables).ok());
}

TEST_CASE("emit_ampl_data: emitter/parser duality on the production data") {
  BoundData bound = fig3_bound();
  std::string text = emit_ampl_data(bound);
  auto reparsed = ampl::parse_data(text);
  REQUIRE(reparsed.ok());
  CHECK(*reparsed == to_data_section(bound));

  // Scalar-only and empty-set cases.
  BoundData small;
  small.sets.push_back({"S", {}});
  BoundParam b;
  b.name = "b";
  b.arity = 0;
  b.scalar = 10.0;
  small.params.push_back(b);
  std::string small_text = emit_ampl_data(small);
  CHECK(small_text.find("set S :=;") != std::string::npos);
  CHECK(small_text.find("param b := 10;") != std::string::npos);
  auto small_parse = ampl::parse_data(small_text);
  REQUIRE(small_parse.ok());
  CHECK(*small_parse == to_data_section(small));
}

TEST_CASE("emit_generic_data: document layout is stable") {
  BoundData data;
  data.sets.push_back({"S", {"A", "B"}});
  BoundParam b;
  b.name = "budget";
  b.arity = 0;
  b.scalar = 10.0;
  data.params.push_back(b);
  BoundParam c;
  c.name = "cost";
  c.arity = 1;
  c.one_d = {{"A", 1.5}, {"B", 2.0}};
  data.params.push_back(c);
  BoundParam u;
  u.name = "use";
  u.arity = 2;
  u.two_d.row_keys = {"A", "B"};
  u.two_d.col_keys = {"S1"};
  u.two_d.values = {0.25, 3.0};
  data.params.push_back(u);

  std::string expected =
      "{\n"
      "  \"sets\": {\n"
      "    \"S\": [\n"
      "      \"A\",\n"
      "      \"B\"\n"
      "    ]\n"
      "  },\n"
      "  \"params\": {\n"
      "    \"budget\": 10,\n"
      "    \"cost\": {\n"
      "      \"A\": 1.5,\n"
      "      \"B\": 2\n"
      "    },\n"
      "    \"use\": {\n"
      "      \"A\": {\n"
      "        \"S1\": 0.25\n"
      "      },\n"
      "      \"B\": {\n"
      "        \"S1\": 3\n"
      "      }\n"
      "    }\n"
      "  }\n"
      "}\n";
  CHECK(emit_generic_data(data) == expected);
  CHECK(emit_generic_data(data) == emit_generic_data(data));

  auto back = read_generic_data(expected);
  REQUIRE(back.ok());
  CHECK(*back == data);
}

TEST_CASE("read_generic_data: rejections") {
  auto expect_bad = [](const std::string& text) {
    auto r = read_generic_data(text);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == IngestErrorKind::BadDocument);
  };
  expect_bad("not json");
  expect_bad("[1,2]");
  expect_bad("{\"sets\": {}}");
  expect_bad("{\"sets\": {\"S\": 3}, \"params\": {}}");
  expect_bad("{\"sets\": {\"S\": [1]}, \"params\": {}}");
  expect_bad("{\"sets\": {}, \"params\": {\"p\": \"x\"}}");
  expect_bad("{\"sets\": {}, \"params\": {\"p\": {\"A\": \"x\"}}}");
  expect_bad(
      "{\"sets\": {}, \"params\": {\"p\": {\"A\": {\"X\": 1}, \"B\": {}}}}");
}

TEST_CASE("property: binding totality under punctured tables") {
  std::mt19937 rng(20240817);
  int failures_seen = 0, fills_seen = 0, complete_seen = 0;
  for (int iter = 0; iter < 300; ++iter) {
    auto pick = [&](int lo, int hi) {
      return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    int arity = pick(1, 2);
    int n1 = pick(1, 3), n2 = arity == 2 ? pick(1, 3) : 1;
    std::vector<std::string> m1, m2;
    for (int i = 0; i < n1; ++i) m1.push_back("a" + std::to_string(i));
    for (int i = 0; i < n2; ++i) m2.push_back("b" + std::to_string(i));

    // Complete cross-product rows, then puncture k of them at random.
    Table table;
    table.name = "t";
    table.path = "t.csv";
    Column k1{"k1", false, {}}, k2{"k2", false, {}}, v{"v", true, {}};
    std::vector<std::pair<std::string, std::string>> combos;
    for (const auto& a : m1)
      for (const auto& b : m2) combos.emplace_back(a, b);
    std::shuffle(combos.begin(), combos.end(), rng);
    int punctures = pick(0, int(combos.size()));
    combos.resize(combos.size() - punctures);
    for (const auto& [a, b] : combos) {
      k1.cells.push_back(a);
      k2.cells.push_back(b);
      v.cells.push_back(std::to_string(pick(-50, 50)));
    }
    table.columns = arity == 2 ? std::vector<Column>{k1, k2, v}
                               : std::vector<Column>{k1, v};
    // An empty punctured table would be an ingest error upstream; represent
    // it directly to keep the property about bind alone.
    TableSet tables;
    tables.tables.push_back(table);

    bool with_default = pick(0, 1) == 1;
    std::string manifest_text =
        "[set S1]\nmembers =";
    for (const auto& a : m1) manifest_text += " " + a;
    manifest_text += "\n[set S2]\nmembers =";
    for (const auto& b : m2) manifest_text += " " + b;
    manifest_text += "\n[param p]\ntable = t\n";
    manifest_text += arity == 2 ? "key_columns = k1, k2\n" : "key_columns = k1\n";
    manifest_text += "value_column = v\n";
    manifest_text += arity == 2 ? "index_sets = S1, S2\n" : "index_sets = S1\n";
    if (with_default) manifest_text += "default = 7\n";
    auto manifest = parse_manifest(manifest_text);
    REQUIRE(manifest.ok());

    auto meta = param_meta("p", arity == 2 ? llm::Dimension::TwoDimensional
                                           : llm::Dimension::OneDimensional);
    auto bound = databind::bind(*manifest, {meta}, tables);

    bool expect_ok = punctures == 0 || with_default;
    REQUIRE(bound.ok() == expect_ok);
    if (!expect_ok) {
      CHECK(bound.error().kind == BindErrorKind::MissingMemberValue);
      ++failures_seen;
      continue;
    }
    const BoundParam& p = bound->params[0];
    std::size_t total = std::size_t(n1) * (arity == 2 ? n2 : 1);
    CHECK((arity == 2 ? p.two_d.values.size() : p.one_d.size()) == total);
    if (punctures > 0) {
      ++fills_seen;
      // Every punctured combination took the default.
      int defaults = 0;
      if (arity == 1) {
        for (const auto& [_, val] : p.one_d) defaults += val == 7.0;
      } else {
        for (double val : p.two_d.values) defaults += val == 7.0;
      }
      CHECK(defaults >= punctures);
    } else {
      ++complete_seen;
    }
  }
  // The generator actually exercised all three regimes.
  CHECK(failures_seen > 30);
  CHECK(fills_seen > 30);
  CHECK(complete_seen > 30);
}

TEST_CASE("property: emitter round-trips on fuzzed bound data") {
  std::mt19937 rng(991);
  for (int iter = 0; iter < 200; ++iter) {
    auto pick = [&](int lo, int hi) {
      return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    auto value = [&]() -> double {
      switch (pick(0, 3)) {
        case 0: return pick(-20, 20);
        case 1: return pick(-400, 400) / 8.0;
        case 2: return pick(1, 9) * 1e-6;
        default: return pick(1, 50) * 12.5;
      }
    };
    BoundData data;
    int nsets = pick(1, 3);
    for (int s = 0; s < nsets; ++s) {
      BoundSet set;
      set.name = "S" + std::to_string(s);
      int members = pick(1, 4);
      for (int m = 0; m < members; ++m)
        set.members.push_back("m" + std::to_string(s) + "_" + std::to_string(m));
      data.sets.push_back(std::move(set));
    }
    int nparams = pick(1, 5);
    for (int p = 0; p < nparams; ++p) {
      BoundParam param;
      param.name = "p" + std::to_string(p);
      param.arity = std::size_t(pick(0, 2));
      if (param.arity == 0) {
        param.scalar = value();
      } else if (param.arity == 1) {
        const BoundSet& s = data.sets[pick(0, nsets - 1)];
        for (const auto& m : s.members) param.one_d.emplace_back(m, value());
      } else {
        const BoundSet& r = data.sets[pick(0, nsets - 1)];
        const BoundSet& c = data.sets[pick(0, nsets - 1)];
        param.two_d.row_keys = r.members;
        param.two_d.col_keys = c.members;
        for (std::size_t i = 0; i < r.members.size() * c.members.size(); ++i)
          param.two_d.values.push_back(value());
      }
      data.params.push_back(std::move(param));
    }

    CAPTURE(iter);
    auto generic = read_generic_data(emit_generic_data(data));
    REQUIRE(generic.ok());
    CHECK(*generic == data);

    auto reparsed = ampl::parse_data(emit_ampl_data(data));
    REQUIRE(reparsed.ok());
    CHECK(*reparsed == to_data_section(data));
    CHECK(from_data_section(*reparsed) == data);
  }
}
