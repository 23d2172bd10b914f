// Exercises the shared library through its C header only.

#include "doctest.h"

#include <cstdlib>
#include <string>

#include "json.hpp"
#include "qbip/qbip.h"

using nlohmann::json;

namespace {

std::string take(char* p) {
  std::string s = p ? p : "";
  qbip_string_free(p);
  return s;
}

json run(const json& cfg, int* code = nullptr) {
  char* out = nullptr;
  int c = -1;
  REQUIRE(qbip_run_suite(cfg.dump().c_str(), &out, &c) == QBIP_OK);
  if (code) *code = c;
  return json::parse(take(out));
}

}  // namespace

TEST_CASE("version and error slot") {
  CHECK(std::string(qbip_version()).size() > 0);
  qbip_expr* e = nullptr;
  CHECK(qbip_expr_parse("(f 1 2)", &e) == QBIP_PARSE);
  CHECK(e == nullptr);
  CHECK(std::string(qbip_last_error()).find("parse") != std::string::npos);
  CHECK(qbip_expr_parse(nullptr, &e) == QBIP_INVALID_ARGUMENT);
}

TEST_CASE("expressions and series") {
  qbip_expr* e = nullptr;
  REQUIRE(qbip_expr_parse("(etaq 1 -1)", &e) == QBIP_OK);
  char* text = nullptr;
  REQUIRE(qbip_expr_to_string(e, &text) == QBIP_OK);
  CHECK(take(text) == "(etaq 1 -1)");

  qbip_series* s = nullptr;
  REQUIRE(qbip_series_eval(e, 0, 100, &s) == QBIP_OK);
  CHECK(qbip_series_order(s) == 100);
  CHECK(qbip_series_modulus(s) == 0);
  char* c = nullptr;
  REQUIRE(qbip_series_coeff(s, 100, &c) == QBIP_OK);
  CHECK(take(c) == "190569292");
  CHECK(qbip_series_coeff(s, 101, &c) == QBIP_RANGE);
  qbip_series_free(s);

  REQUIRE(qbip_series_eval(e, 7, 30, &s) == QBIP_OK);
  REQUIRE(qbip_series_coeff(s, 5, &c) == QBIP_OK);
  CHECK(take(c) == "0");
  REQUIRE(qbip_series_to_string(s, 3, &c) == QBIP_OK);
  CHECK(take(c).rfind("1 + q + 2q^2", 0) == 0);
  qbip_series_free(s);
  qbip_expr_free(e);
}

TEST_CASE("coefficients") {
  char* out = nullptr;
  REQUIRE(qbip_bipartition_coeff(3, 7, 0, 0, &out) == QBIP_OK);
  CHECK(take(out) == "1");
  REQUIRE(qbip_bipartition_coeff(3, 7, 2, 0, &out) == QBIP_OK);
  CHECK(take(out) == "5");
  REQUIRE(qbip_bipartition_coeff(3, 7, 5, 7, &out) == QBIP_OK);
  CHECK(take(out) == "3");
  REQUIRE(qbip_bipartition_coeff(3, 7, 5, (1ULL << 40) + 15, &out) == QBIP_OK);
  const std::string big = take(out);
  REQUIRE(qbip_bipartition_coeff(3, 7, 5, 0, &out) == QBIP_OK);
  CHECK(take(out) == big);
  CHECK(qbip_bipartition_coeff(3, 7, 30000, 0, &out) == QBIP_RANGE);
  CHECK(std::string(qbip_last_error()).find("modulus") != std::string::npos);
  CHECK(qbip_bipartition_coeff(1, 7, 5, 0, &out) == QBIP_INVALID_ARGUMENT);
  CHECK(qbip_bipartition_coeff(3, 7, 5, 1, &out) == QBIP_INVALID_ARGUMENT);
  REQUIRE(qbip_regular_coeff(2, 10, 0, &out) == QBIP_OK);
  CHECK(take(out) == "10");
  REQUIRE(qbip_regular_coeff(17, 30000, 17, &out) == QBIP_OK);
  CHECK(std::stoi(take(out)) < 17);
}

TEST_CASE("listing") {
  char* out = nullptr;
  REQUIRE(qbip_list(&out) == QBIP_OK);
  auto j = json::parse(take(out));
  CHECK(j["identities"].size() >= 14);
  CHECK(j["chains"].size() == 7);
  CHECK(j["families"].size() >= 20);
}

TEST_CASE("identity suite report") {
  int code = -1;
  auto r = run({{"suite", "identities"}}, &code);
  CHECK(code == 0);
  CHECK(r["suite"] == "identities");
  CHECK(r["summary"]["total"].get<int>() >= 14);
  CHECK(r["summary"]["failures"] == 0);
  for (const auto& c : r["cases"]) {
    CHECK(c.contains("id"));
    CHECK(c.contains("status"));
    CHECK(c.contains("order"));
    CHECK(c.contains("runtime_ms"));
  }
}

TEST_CASE("suite config errors") {
  char* out = nullptr;
  int code = 0;
  CHECK(qbip_run_suite(R"({"suite":"nope"})", &out, &code) == QBIP_INVALID_ARGUMENT);
  CHECK(qbip_run_suite(R"({"order":0})", &out, &code) == QBIP_INVALID_ARGUMENT);
  CHECK(qbip_run_suite(R"({"n_max":-3})", &out, &code) == QBIP_INVALID_ARGUMENT);
  CHECK(qbip_run_suite(R"({"colour":"red"})", &out, &code) == QBIP_INVALID_ARGUMENT);
  CHECK(qbip_run_suite(R"({"format":"xml"})", &out, &code) == QBIP_INVALID_ARGUMENT);
  CHECK(qbip_run_suite("{not json", &out, &code) == QBIP_PARSE);
  CHECK(qbip_run_suite(R"({"suite":"identities","ids":["missing"]})", &out, &code) == QBIP_NOT_FOUND);
  CHECK(qbip_run_suite(R"({"suite":"families","families":["missing"]})", &out, &code) == QBIP_NOT_FOUND);
}

TEST_CASE("failures set the exit code") {
  auto path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/qbip-capi-reg.txt";
  FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f);
  std::fputs("broken | exact | 50 | (etaq 1 1) | (etaq 2 1)\n", f);
  std::fclose(f);
  int code = 0;
  auto r = run({{"suite", "identities"}, {"ids", {"broken", "inv-f1-sq"}}, {"registry_file", path}}, &code);
  std::remove(path.c_str());
  CHECK(code == 1);
  REQUIRE(r["cases"].size() == 2);
  CHECK(r["cases"][0]["id"] == "broken");
  CHECK(r["cases"][0]["status"] == "mismatch");
  CHECK(r["cases"][0]["first_mismatch"]["index"] == 1);
  CHECK(r["summary"]["failures"] == 1);
}

TEST_CASE("erratum candidates and skips do not fail a run") {
  int code = -1;
  auto r = run({{"suite", "chains"}, {"chains", {"b17-mod17"}}}, &code);
  CHECK(code == 0);
  CHECK(r["cases"][0]["status"] == "erratum-candidate");
  CHECK(r["summary"]["erratum_candidate"] == 1);

  auto s = run({{"suite", "families"}, {"families", {"b5-11-zero"}}}, &code);
  CHECK(code == 0);
  CHECK(s["cases"][0]["status"] == "skipped");
  CHECK(s["cases"][0]["params"][0]["message"].get<std::string>().find("needs index") != std::string::npos);
}

TEST_CASE("property: summaries recompute from the parsed cases") {
  auto r = run({{"suite", "all"},
                {"families", {"b2-8-zero", "b3-7-16n5", "b5-11-zero"}},
                {"n_max", 40},
                {"jobs", 2}});
  json cases = r["cases"];
  json recount{{"total", 0}, {"pass", 0}, {"failures", 0}, {"skipped", 0}, {"refuted", 0}, {"erratum_candidate", 0}};
  for (const auto& c : cases) {
    const std::string st = c["status"];
    recount["total"] = recount["total"].get<int>() + 1;
    for (const auto& [key, name] : std::vector<std::pair<std::string, std::string>>{
             {"pass", "pass"}, {"skipped", "skipped"}, {"refuted", "refuted"}, {"erratum_candidate", "erratum-candidate"}}) {
      if (st == name) recount[key] = recount[key].get<int>() + 1;
    }
    if (st == "mismatch" || st == "fail" || st == "error") recount["failures"] = recount["failures"].get<int>() + 1;
  }
  for (const auto& [k, v] : recount.items()) CHECK(r["summary"][k] == v);

  char* text = nullptr;
  REQUIRE(qbip_render_report(r.dump().c_str(), "json", &text) == QBIP_OK);
  CHECK(json::parse(take(text)) == r);
  REQUIRE(qbip_render_report(r.dump().c_str(), "csv", &text) == QBIP_OK);
  CHECK(take(text).rfind("kind,id,item,status", 0) == 0);
  REQUIRE(qbip_render_report(r.dump().c_str(), "text", &text) == QBIP_OK);
  CHECK(take(text).find("summary:") != std::string::npos);
  CHECK(qbip_render_report(r.dump().c_str(), "yaml", &text) == QBIP_INVALID_ARGUMENT);
}

TEST_CASE("parallel runs keep registry order") {
  auto a = run({{"suite", "identities"}, {"jobs", 1}});
  auto b = run({{"suite", "identities"}, {"jobs", 4}});
  REQUIRE(a["cases"].size() == b["cases"].size());
  for (std::size_t i = 0; i < a["cases"].size(); ++i) {
    CHECK(a["cases"][i]["id"] == b["cases"][i]["id"]);
    CHECK(a["cases"][i]["status"] == b["cases"][i]["status"]);
  }
}

TEST_CASE("overrides appear in the report") {
  auto r = run({{"suite", "identities"}, {"ids", {"jtp-phi"}}, {"order", 120}, {"modulus", 101}});
  CHECK(r["cases"][0]["order"] == 120);
  CHECK(r["cases"][0]["mode"] == "mod 101");
  CHECK(r["config"]["order"] == 120);
  auto f = run({{"suite", "families"}, {"families", {"b2-8-zero"}}, {"n_max", 7}});
  for (const auto& p : f["cases"][0]["params"]) CHECK(p["n_range"][1] == 7);
}
