#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "exeos/ampl/parser.hpp"
#include "exeos/llm/gateway.hpp"
#include "test_util.hpp"

using namespace exeos;
using namespace exeos::llm;

namespace {

LlmConfig scripted_sequence(std::vector<std::string> responses) {
  LlmConfig config;
  ScriptedBackend sb;
  sb.sequence = std::move(responses);
  config.backend = std::move(sb);
  return config;
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  return path.string();
}

const std::string kGoodStructure =
    "OBJECTIVES:\n"
    "maximize total sales revenue\n"
    "minimize holding costs of unused resources\n"
    "PARAMETERS:\n"
    "TypeProducts | one-dimensional | product catalogue\n"
    "TypeResources | one-dimensional | resource catalogue\n"
    "price | one-dimensional | sale price per product\n"
    "unit | two-dimensional | resource units needed per product\n"
    "inventory | one-dimensional | starting resource stock\n"
    "hold | one-dimensional | holding cost per leftover unit\n"
    "buyCost | one-dimensional | cost per purchased resource unit\n"
    "budget | scalar | purchasing budget\n"
    "VARIABLES:\n"
    "x | one-dimensional | production quantity per product\n"
    "y | one-dimensional | purchased units per resource\n"
    "CONSTRAINTS:\n"
    "resource usage is covered by inventory plus purchases\n"
    "purchases stay within the budget\n"
    "REWRITTEN:\n"
    "Choose \\var{x} and \\var{y} to maximize revenue at \\param{price} "
    "within \\param{budget}.\n";

}  // namespace

TEST_CASE("scripted sequence: deterministic order then exhaustion") {
  Gateway gw(scripted_sequence({"A", "B"}));
  auto r1 = gw.complete("first prompt");
  auto r2 = gw.complete("second prompt");
  REQUIRE(r1.ok());
  REQUIRE(r2.ok());
  CHECK(r1.value() == "A");
  CHECK(r2.value() == "B");
  auto r3 = gw.complete("third prompt");
  REQUIRE(!r3.ok());
  CHECK(r3.error().kind == LlmErrorKind::ScriptExhausted);
}

TEST_CASE("script file: ordinal and keyed forms") {
  SUBCASE("ordinal blocks ordered by key") {
    std::string path = write_temp(
        "exeos_script_seq.txt", "### 1\nsecond\n### 0\nfirst\nline two\n");
    auto sb = load_script(path);
    REQUIRE(sb.ok());
    REQUIRE(sb->sequence.size() == 2);
    CHECK(sb->sequence[0] == "first\nline two");
    CHECK(sb->sequence[1] == "second");
  }
  SUBCASE("hash and contains keys") {
    std::string hash = fnv1a_hex("the exact prompt");
    std::string path = write_temp(
        "exeos_script_keyed.txt",
        "### hash:" + hash + "\nexact match\n### contains:needle\nby fragment\n");
    auto sb = load_script(path);
    REQUIRE(sb.ok());
    LlmConfig config;
    config.backend = sb.value();
    Gateway gw(config);
    auto exact = gw.complete("the exact prompt");
    REQUIRE(exact.ok());
    CHECK(exact.value() == "exact match");
    auto frag = gw.complete("a prompt holding the needle somewhere");
    REQUIRE(frag.ok());
    CHECK(frag.value() == "by fragment");
    auto miss = gw.complete("nothing matches this");
    REQUIRE(!miss.ok());
    CHECK(miss.error().kind == LlmErrorKind::ScriptExhausted);
  }
  SUBCASE("bad key rejected") {
    std::string path =
        write_temp("exeos_script_bad.txt", "### banana\nresponse\n");
    CHECK(!load_script(path).ok());
  }
}

TEST_CASE("structure_problem: parses the delimited schema") {
  Gateway gw(scripted_sequence({kGoodStructure}));
  auto sp = gw.structure_problem("A factory makes products...", {});
  REQUIRE(sp.ok());
  CHECK(sp->objectives.size() == 2);
  CHECK(sp->parameters.size() == 8);
  CHECK(sp->variables.size() == 2);
  CHECK(sp->constraints.size() == 2);
  CHECK(sp->parameters[0].name == "TypeProducts");
  CHECK(sp->parameters[0].dimension == Dimension::OneDimensional);
  CHECK(sp->parameters[7].name == "budget");
  CHECK(sp->parameters[7].dimension == Dimension::Scalar);
  CHECK(sp->variables[0].kind == SymbolKind::Variable);
  CHECK(sp->rewritten_description.find("\\var{x}") != std::string::npos);
}

TEST_CASE("structure_problem: strict schema failures") {
  SUBCASE("missing PARAMETERS block") {
    std::string text =
        "OBJECTIVES:\no\nVARIABLES:\nx | scalar | d\nCONSTRAINTS:\nc\n"
        "REWRITTEN:\nr\n";
    Gateway gw(scripted_sequence({text}));
    auto sp = gw.structure_problem("d", {});
    REQUIRE(!sp.ok());
    CHECK(sp.error().kind == LlmErrorKind::MalformedStructure);
    CHECK(sp.error().message.find("PARAMETERS:") != std::string::npos);
  }
  SUBCASE("unresolved markup") {
    std::string text =
        "OBJECTIVES:\no\nPARAMETERS:\np | scalar | d\nVARIABLES:\n"
        "x | scalar | d\nCONSTRAINTS:\nc\nREWRITTEN:\nuses \\param{ghost}\n";
    Gateway gw(scripted_sequence({text}));
    auto sp = gw.structure_problem("d", {});
    REQUIRE(!sp.ok());
    CHECK(sp.error().kind == LlmErrorKind::MalformedStructure);
  }
  SUBCASE("bad dimension") {
    std::string text =
        "OBJECTIVES:\no\nPARAMETERS:\np | 3d | d\nVARIABLES:\n"
        "x | scalar | d\nCONSTRAINTS:\nc\nREWRITTEN:\nr\n";
    Gateway gw(scripted_sequence({text}));
    CHECK(!gw.structure_problem("d", {}).ok());
  }
  SUBCASE("duplicate symbol") {
    std::string text =
        "OBJECTIVES:\no\nPARAMETERS:\np | scalar | d\nVARIABLES:\n"
        "p | scalar | d\nCONSTRAINTS:\nc\nREWRITTEN:\nr\n";
    Gateway gw(scripted_sequence({text}));
    CHECK(!gw.structure_problem("d", {}).ok());
  }
}

TEST_CASE("structured schema: render/parse round-trip") {
  auto parsed = parse_structured(kGoodStructure);
  REQUIRE(parsed.ok());
  std::string rendered = render_structured(parsed.value());
  auto reparsed = parse_structured(rendered);
  REQUIRE(reparsed.ok());
  CHECK(parsed.value() == reparsed.value());
  // Canonical text is a fixed point of render(parse(.)).
  CHECK(render_structured(reparsed.value()) == rendered);
}

TEST_CASE("structured schema: fuzzed markup always resolves") {
  std::mt19937 rng(7);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (int iter = 0; iter < 100; ++iter) {
    StructuredProblem sp;
    int np = pick(0, 5), nv = pick(1, 4);
    for (int i = 0; i < np; ++i)
      sp.parameters.push_back({"p" + std::to_string(i), "a param",
                               static_cast<Dimension>(pick(0, 2)),
                               SymbolKind::Parameter});
    for (int i = 0; i < nv; ++i)
      sp.variables.push_back({"v" + std::to_string(i), "a var",
                              static_cast<Dimension>(pick(0, 2)),
                              SymbolKind::Variable});
    sp.objectives.push_back("objective text");
    sp.constraints.push_back("constraint text");
    std::string desc = "Optimize";
    for (int k = 0; k < pick(0, 6); ++k) {
      if (np > 0 && pick(0, 1))
        desc += " \\param{p" + std::to_string(pick(0, np - 1)) + "}";
      else
        desc += " \\var{v" + std::to_string(pick(0, nv - 1)) + "}";
    }
    sp.rewritten_description = desc;
    auto reparsed = parse_structured(render_structured(sp));
    REQUIRE(reparsed.ok());
    CHECK(reparsed.value() == sp);
    for (const auto& [name, is_var] : markup_tokens(desc)) {
      bool found = false;
      for (const auto& m : is_var ? sp.variables : sp.parameters)
        found |= m.name == name;
      CHECK(found);
    }
  }
}

TEST_CASE("generate_spec: extraction rules") {
  std::string fig3 = testutil::read_file(testutil::fixture("fig3/model.mod"));
  SUBCASE("fenced block extracted exactly") {
    Gateway gw(scripted_sequence({"Here is the model:\n```ampl\n" + fig3 +
                                  "```\nGood luck!"}));
    auto spec = gw.generate_spec(std::string("desc"), Target::Ampl,
                                 {{"p", "a"}});
    REQUIRE(spec.ok());
    std::string expected = fig3;
    while (!expected.empty() && expected.back() == '\n') expected.pop_back();
    CHECK(spec.value() == expected);
    auto ast = ampl::parse_model(spec.value());
    CHECK(ast.ok());
  }
  SUBCASE("no fence falls back to whole trimmed response") {
    Gateway gw(scripted_sequence({"\n  var x >= 0; maximize Z: x;  \n"}));
    auto spec = gw.generate_spec(std::string("desc"), Target::Ampl,
                                 {{"p", "a"}});
    REQUIRE(spec.ok());
    CHECK(spec.value() == "var x >= 0; maximize Z: x;");
  }
  SUBCASE("empty response is no-spec-block") {
    Gateway gw(scripted_sequence({"   \n  "}));
    auto spec = gw.generate_spec(std::string("desc"), Target::Ampl,
                                 {{"p", "a"}});
    REQUIRE(!spec.ok());
    CHECK(spec.error().kind == LlmErrorKind::NoSpecBlock);
  }
}

TEST_CASE("prompt assembly: deterministic and complete") {
  std::vector<std::string> captured;
  Gateway gw(scripted_sequence({"resp", "resp", "resp", "resp"}));
  gw.set_prompt_hook([&](const std::string& p) { captured.push_back(p); });

  std::vector<FewShot> shots = {{"problem one", "answer one"},
                                {"problem two", "answer two"}};
  (void)gw.generate_spec(std::string("the raw description"), Target::Ampl,
                         shots);
  REQUIRE(captured.size() == 1);
  CHECK(captured[0].find("EXAMPLE INPUT:\nproblem one") != std::string::npos);
  CHECK(captured[0].find("EXAMPLE RESPONSE:\nanswer two") !=
        std::string::npos);
  CHECK(captured[0].find("PROBLEM:\nthe raw description") !=
        std::string::npos);
  CHECK(captured[0] ==
        build_generation_prompt(std::string("the raw description"),
                                Target::Ampl, shots));

  // Refinement embeds the previous spec and the verbatim feedback.
  std::string feedback =
      "syntax at line 3, column 7: expected ';' before 'maximize'";
  (void)gw.refine_spec("var x; maximize Z: x;", feedback,
                       std::string("the raw description"), Target::Ampl,
                       shots);
  REQUIRE(captured.size() == 2);
  CHECK(captured[1].find("PREVIOUS SPECIFICATION:\nvar x; maximize Z: x;") !=
        std::string::npos);
  CHECK(captured[1].find(feedback) != std::string::npos);
  CHECK(captured[1].find(captured[0].substr(0, 40)) != std::string::npos);

  // Structured context is rendered through the canonical schema.
  auto sp = parse_structured(kGoodStructure);
  REQUIRE(sp.ok());
  (void)gw.generate_spec(sp.value(), Target::ExternalRuntime, shots);
  REQUIRE(captured.size() == 3);
  CHECK(captured[2].find("TypeProducts | one-dimensional") !=
        std::string::npos);
  CHECK(captured[2].find("external runtime") != std::string::npos);

  // Byte-identical reassembly.
  (void)gw.generate_spec(sp.value(), Target::ExternalRuntime, shots);
  REQUIRE(captured.size() == 4);
  CHECK(captured[2] == captured[3]);
}

TEST_CASE("refine_spec: hash-keyed script answers per feedback") {
  std::vector<FewShot> shots = {{"p", "a"}};
  std::string broken = "var x maximize Z: x;";
  std::string fixed = "var x;\nmaximize Z: x;";
  std::string feedback = "syntax: expected ';'";
  std::string prompt = build_refinement_prompt(
      broken, feedback, std::string("ctx"), Target::Ampl, shots);

  LlmConfig config;
  ScriptedBackend sb;
  sb.keyed[fnv1a_hex(prompt)] = "```\n" + fixed + "\n```";
  config.backend = std::move(sb);
  Gateway gw(config);
  auto spec =
      gw.refine_spec(broken, feedback, std::string("ctx"), Target::Ampl, shots);
  REQUIRE(spec.ok());
  CHECK(spec.value() == fixed);
}

TEST_CASE("remote backend: loopback server, auth, retries") {
  httplib::Server server;
  std::atomic<int> hits{0};
  std::string seen_auth;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                ++hits;
                seen_auth = req.get_header_value("Authorization");
                auto body = nlohmann::json::parse(req.body);
                std::string prompt = body["messages"][0]["content"];
                nlohmann::json reply = {
                    {"choices",
                     {{{"message",
                        {{"content", "echo: " + prompt.substr(0, 10)}}}}}}};
                res.set_content(reply.dump(), "application/json");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("EXEOS_TEST_TOKEN", "sekrit", 1);
  LlmConfig config;
  RemoteBackend rb;
  rb.endpoint = "http://127.0.0.1:" + std::to_string(port);
  rb.model = "test-model";
  rb.auth_token_env = "EXEOS_TEST_TOKEN";
  config.backend = rb;
  config.retries = 0;
  config.rate_limit_per_minute = 100000;
  Gateway gw(config);

  auto r = gw.complete("hello world prompt");
  REQUIRE(r.ok());
  CHECK(r.value() == "echo: hello worl");
  CHECK(seen_auth == "Bearer sekrit");
  CHECK(hits == 1);

  server.stop();
  server_thread.join();

  // Unreachable endpoint: configured retries then GatewayError{http}.
  LlmConfig bad = config;
  std::get<RemoteBackend>(bad.backend).endpoint = "http://127.0.0.1:1";
  bad.retries = 1;
  Gateway gw_bad(bad);
  auto err = gw_bad.complete("anything");
  REQUIRE(!err.ok());
  CHECK(err.error().kind == LlmErrorKind::Http);
  CHECK(err.error().message.find("2 attempt(s)") != std::string::npos);
}

TEST_CASE("remote backend: gemini adapter shape") {
  httplib::Server server;
  std::string seen_path, seen_key;
  server.Post(R"(/v1beta/models/.*)",
              [&](const httplib::Request& req, httplib::Response& res) {
                seen_path = req.path;
                seen_key = req.get_header_value("x-goog-api-key");
                nlohmann::json reply = {
                    {"candidates",
                     {{{"content",
                        {{"parts", {{{"text", "gemini says hi"}}}}}}}}}};
                res.set_content(reply.dump(), "application/json");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("EXEOS_TEST_TOKEN2", "gkey", 1);
  LlmConfig config;
  RemoteBackend rb;
  rb.endpoint = "http://127.0.0.1:" + std::to_string(port);
  rb.model = "gemini-test";
  rb.auth_token_env = "EXEOS_TEST_TOKEN2";
  rb.flavor = "gemini";
  config.backend = rb;
  config.rate_limit_per_minute = 100000;
  Gateway gw(config);
  auto r = gw.complete("ping");
  REQUIRE(r.ok());
  CHECK(r.value() == "gemini says hi");
  CHECK(seen_path == "/v1beta/models/gemini-test:generateContent");
  CHECK(seen_key == "gkey");

  server.stop();
  server_thread.join();
}

TEST_CASE("fixed point: markup-only description structure") {
  // A response whose REWRITTEN equals the already-marked-up input.
  std::string input = "Maximize \\param{price} times \\var{x}.";
  std::string response =
      "OBJECTIVES:\nmaximize\nPARAMETERS:\nprice | one-dimensional | p\n"
      "VARIABLES:\nx | one-dimensional | v\nCONSTRAINTS:\nnone stated\n"
      "REWRITTEN:\n" + input + "\n";
  Gateway gw(scripted_sequence({response}));
  auto sp = gw.structure_problem(input, {});
  REQUIRE(sp.ok());
  CHECK(sp->rewritten_description == input);
}
