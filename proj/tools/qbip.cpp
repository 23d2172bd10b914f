// qbip command-line tool. Talks to the library only through qbip.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbip/qbip.h"

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { qbip_string_free(p); }
};

int fail(qbip_status st) {
  std::cerr << "qbip: " << qbip_last_error() << "\n";
  return st == QBIP_INVALID_ARGUMENT || st == QBIP_PARSE || st == QBIP_NOT_FOUND ? 2 : 3;
}

int cmd_coeff(std::int64_t l, std::int64_t m, std::size_t n, std::uint64_t mod, bool regular) {
  Owned out;
  qbip_status st = regular ? qbip_regular_coeff(l, n, mod, &out.p) : qbip_bipartition_coeff(l, m, n, mod, &out.p);
  if (st != QBIP_OK) return fail(st);
  std::cout << out.p << "\n";
  return 0;
}

int cmd_eval(const std::string& text, std::size_t order, std::uint64_t mod, std::size_t terms) {
  qbip_expr* e = nullptr;
  if (auto st = qbip_expr_parse(text.c_str(), &e); st != QBIP_OK) return fail(st);
  std::unique_ptr<qbip_expr, decltype(&qbip_expr_free)> expr(e, qbip_expr_free);
  qbip_series* s = nullptr;
  if (auto st = qbip_series_eval(expr.get(), mod, order, &s); st != QBIP_OK) return fail(st);
  std::unique_ptr<qbip_series, decltype(&qbip_series_free)> series(s, qbip_series_free);
  Owned out;
  if (auto st = qbip_series_to_string(series.get(), terms, &out.p); st != QBIP_OK) return fail(st);
  std::cout << out.p << "\n";
  return 0;
}

int cmd_list(bool as_json) {
  Owned out;
  if (auto st = qbip_list(&out.p); st != QBIP_OK) return fail(st);
  auto j = nlohmann::json::parse(out.p);
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "identities\n";
  for (const auto& c : j["identities"]) {
    std::printf("  %-22s %-10s %s  %s\n", c["id"].get<std::string>().c_str(), c["label"].get<std::string>().c_str(),
                c["hash"].get<std::string>().c_str(), c["section"].get<std::string>().c_str());
  }
  std::cout << "\nchains\n";
  for (const auto& c : j["chains"]) {
    std::printf("  %-22s %s\n", c["id"].get<std::string>().c_str(), c["title"].get<std::string>().c_str());
  }
  std::cout << "\nfamilies\n";
  for (const auto& f : j["families"]) {
    std::printf("  %-26s mod %-3s %s\n", f["id"].get<std::string>().c_str(), f["modulus"].dump().c_str(),
                f["statement"].get<std::string>().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated q-series engine and congruence verifier for regular bipartitions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qbip_version()));

  std::int64_t l = 0, m = 0;
  std::size_t n = 0;
  std::uint64_t mod = 0;
  bool regular = false;
  auto* coeff = app.add_subcommand("coeff", "Print B_{l,m}(n), or b_l(n) with --regular");
  coeff->add_option("l", l, "first regularity")->required()->check(CLI::Range(2, 1 << 30));
  coeff->add_option("m", m, "second regularity (ignored with --regular)")->required();
  coeff->add_option("n", n, "index")->required();
  coeff->add_option("--mod", mod, "reduce modulo this")->check(CLI::Range(std::uint64_t{2}, UINT64_MAX));
  coeff->add_flag("--regular", regular, "count l-regular partitions of n instead");

  nlohmann::json cfg = nlohmann::json::object();
  std::string suite = "all", format = "text", output, cache_dir, registry;
  std::vector<std::string> ids, chains, families;
  std::size_t order = 0, n_max = 0;
  std::uint64_t vmod = 0;
  unsigned jobs = 1;
  auto* verify = app.add_subcommand("verify", "Run identity, chain and family checks");
  verify->add_option("--suite", suite, "identities, chains, families or all")->capture_default_str();
  verify->add_option("--id", ids, "identity id, label or hash (repeatable)");
  verify->add_option("--chain", chains, "chain id (repeatable)");
  verify->add_option("--family", families, "family id or id prefix (repeatable)");
  verify->add_option("--order", order, "truncation order for identities and chains");
  verify->add_option("--n-max", n_max, "upper end of every family's n range");
  verify->add_option("--modulus", vmod, "check identities modulo this");
  verify->add_option("--format", format, "text, json or csv")->capture_default_str();
  verify->add_option("--output,-o", output, "write the report here instead of stdout");
  verify->add_option("--jobs,-j", jobs, "cases run in parallel")->capture_default_str();
  verify->add_option("--cache-dir", cache_dir, "table cache directory (default $QBIP_CACHE_DIR)");
  verify->add_option("--registry", registry, "file of extra identities");

  std::string text;
  std::size_t eval_order = 20, terms = 30;
  std::uint64_t eval_mod = 0;
  auto* eval = app.add_subcommand("eval", "Expand a q-expression");
  eval->add_option("expr", text, "expression in prefix form, e.g. '(etaq 2 5 1 -2 4 -2)'")->required();
  eval->add_option("--order", eval_order, "truncation order")->capture_default_str();
  eval->add_option("--mod", eval_mod, "coefficient modulus");
  eval->add_option("--terms", terms, "terms to print")->capture_default_str();

  bool list_json = false;
  auto* list = app.add_subcommand("list", "List identities, chains and families");
  list->add_flag("--json", list_json, "print JSON");

  CLI11_PARSE(app, argc, argv);

  if (*coeff) return cmd_coeff(l, m, n, mod, regular);
  if (*eval) return cmd_eval(text, eval_order, eval_mod, terms);
  if (*list) return cmd_list(list_json);

  cfg["suite"] = suite;
  cfg["jobs"] = jobs;
  cfg["format"] = format;
  if (!ids.empty()) cfg["ids"] = ids;
  if (!chains.empty()) cfg["chains"] = chains;
  if (!families.empty()) cfg["families"] = families;
  if (verify->count("--order")) cfg["order"] = order;
  if (verify->count("--n-max")) cfg["n_max"] = n_max;
  if (verify->count("--modulus")) cfg["modulus"] = vmod;
  if (!cache_dir.empty()) cfg["cache_dir"] = cache_dir;
  if (!registry.empty()) cfg["registry_file"] = registry;
  if (verify->count("--order") && order == 0) cfg["order"] = -1;
  if (verify->count("--n-max") && n_max == 0) cfg["n_max"] = -1;
  if (verify->count("--modulus") && vmod == 0) cfg["modulus"] = -1;

  Owned report, rendered;
  int code = 0;
  if (auto st = qbip_run_suite(cfg.dump().c_str(), &report.p, &code); st != QBIP_OK) return fail(st);
  if (auto st = qbip_render_report(report.p, format.c_str(), &rendered.p); st != QBIP_OK) return fail(st);
  if (output.empty()) {
    std::cout << rendered.p;
  } else {
    std::ofstream os(output);
    os << rendered.p;
    if (!os) {
      std::cerr << "qbip: cannot write " << output << "\n";
      return 3;
    }
  }
  return code;
}
