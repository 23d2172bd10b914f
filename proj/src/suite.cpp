#include "qbip/suite.hpp"

#include <atomic>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "qbip/congruences.hpp"
#include "qbip/identities.hpp"

namespace qbip {

using nlohmann::json;

namespace {

const std::set<std::string> kSuites = {"identities", "chains", "families", "all"};

bool selected(const std::string& suite, const char* part) { return suite == "all" || suite == part; }

json mismatch_json(const Mismatch& m) {
  return {{"index", m.index}, {"lhs", m.lhs.get_str()}, {"rhs", m.rhs.get_str()}};
}

json identity_case(const IdentityCase& c, const IdentityResult& r) {
  json j{{"id", c.id},
         {"kind", "identity"},
         {"label", c.label},
         {"section", c.section},
         {"hash", c.content_hash()},
         {"status", to_string(r.status)},
         {"order", r.order},
         {"runtime_ms", r.runtime_ms}};
  if (r.modulus) {
    j["mode"] = "mod " + std::to_string(r.modulus);
  } else if (!r.primes.empty()) {
    json ps = json::array();
    for (auto p : r.primes) ps.push_back(std::to_string(p));
    j["mode"] = "exact by residues";
    j["primes"] = ps;
  } else {
    j["mode"] = "exact";
  }
  if (r.first_mismatch) {
    j["first_mismatch"] = mismatch_json(*r.first_mismatch);
    if (r.mismatch_prime) j["first_mismatch"]["prime"] = std::to_string(r.mismatch_prime);
  }
  if (!r.message.empty()) j["message"] = r.message;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json chain_case(const ProofChain& c, const ChainResult& r) {
  json stages = json::array();
  for (const auto& s : r.stages) {
    json st{{"label", s.label}, {"step", s.step}, {"status", to_string(s.status)}};
    if (s.surviving) st["surviving"] = s.surviving;
    if (s.order) st["order"] = s.order;
    if (s.first_mismatch) st["first_mismatch"] = mismatch_json(*s.first_mismatch);
    if (!s.message.empty()) st["message"] = s.message;
    stages.push_back(std::move(st));
  }
  json j{{"id", c.id},        {"kind", "chain"},           {"title", c.title},
         {"status", to_string(r.status)}, {"order", r.order}, {"asserted", r.asserted()},
         {"min_surviving", r.min_surviving()}, {"stages", stages}, {"runtime_ms", r.runtime_ms}};
  for (const auto& s : r.stages) {
    if (s.first_mismatch) {
      j["first_mismatch"] = mismatch_json(*s.first_mismatch);
      j["first_mismatch"]["stage"] = s.label;
      break;
    }
  }
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json family_case(const CongruenceFamily& f, const FamilyReport& r) {
  json params = json::array();
  for (const auto& i : r.instances) {
    json v = json::array();
    for (const auto& x : i.violations) {
      v.push_back({{"n", x.n}, {"index", x.index.get_ui()}, {"got", x.got}, {"expected", x.expected}});
    }
    json p{{"params", i.params},
           {"status", to_string(i.status)},
           {"n_range", json::array({0, i.n_max})},
           {"max_index", i.max_index.get_str()},
           {"checked", i.checked},
           {"violation_count", i.violation_count},
           {"violations", v}};
    if (!i.message.empty()) p["message"] = i.message;
    params.push_back(std::move(p));
  }
  json j{{"id", f.id},
         {"kind", "family"},
         {"title", f.title},
         {"statement", f.statement},
         {"modulus", f.p},
         {"status", to_string(r.status)},
         {"checked", r.checked()},
         {"violation_count", r.violation_count()},
         {"params", params},
         {"sources", r.sources},
         {"runtime_ms", r.runtime_ms}};
  if (!f.reading.empty()) j["reading"] = f.reading;
  for (const auto& i : r.instances) {
    if (!i.violations.empty()) {
      const auto& x = i.violations.front();
      j["first_mismatch"] = {{"params", i.params}, {"n", x.n}, {"index", x.index.get_ui()}, {"lhs", x.got},
                             {"rhs", x.expected}};
      break;
    }
  }
  return j;
}

json error_case(const std::string& id, const char* kind, const std::string& what) {
  return {{"id", id}, {"kind", kind}, {"status", "error"}, {"message", what}, {"runtime_ms", 0.0}};
}

// Runs tasks on `jobs` threads; results keep task order.
std::vector<json> run_all(std::vector<std::function<json()>>& tasks, unsigned jobs) {
  std::vector<json> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) out[i] = tasks[i]();
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::string fmt_ms(double ms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(ms < 10 ? 2 : 0) << ms << " ms";
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string str(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& v = j.at(key);
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

Format parse_format(std::string_view s) {
  if (s == "text") return Format::text;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw Error(Errc::invalid_argument, "unknown format '" + std::string(s) + "' (text, json or csv)");
}

SuiteConfig SuiteConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::invalid_argument, "suite config must be a JSON object");
  static const std::set<std::string> keys = {"suite",  "ids",    "chains",    "families",  "order",        "n_max",
                                             "modulus", "format", "jobs",      "cache_dir", "registry_file"};
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw Error(Errc::invalid_argument, "unknown config key '" + k + "'");
  }
  SuiteConfig c;
  try {
    if (j.contains("suite")) c.suite = j["suite"].get<std::string>();
    if (j.contains("ids")) c.ids = j["ids"].get<std::vector<std::string>>();
    if (j.contains("chains")) c.chains = j["chains"].get<std::vector<std::string>>();
    if (j.contains("families")) c.families = j["families"].get<std::vector<std::string>>();
    auto positive = [&](const char* key) -> std::uint64_t {
      const auto& v = j[key];
      if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
        throw Error(Errc::invalid_argument, std::string(key) + " must be a positive integer");
      }
      return v.get<std::uint64_t>();
    };
    if (j.contains("order")) c.order = positive("order");
    if (j.contains("n_max")) c.n_max = positive("n_max");
    if (j.contains("modulus")) c.modulus = positive("modulus");
    if (j.contains("jobs")) c.jobs = static_cast<unsigned>(positive("jobs"));
    if (j.contains("format")) c.format = parse_format(j["format"].get<std::string>());
    if (j.contains("cache_dir")) c.cache_dir = j["cache_dir"].get<std::string>();
    if (j.contains("registry_file")) c.registry_file = j["registry_file"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("bad config value: ") + e.what());
  }
  if (!kSuites.count(c.suite)) {
    throw Error(Errc::invalid_argument, "unknown suite '" + c.suite + "' (identities, chains, families or all)");
  }
  if (c.modulus == 1) throw Error(Errc::invalid_argument, "modulus must be at least 2");
  return c;
}

json SuiteConfig::to_json() const {
  json j{{"suite", suite}, {"ids", ids}, {"chains", chains}, {"families", families}, {"jobs", jobs}};
  if (order) j["order"] = order;
  if (n_max) j["n_max"] = n_max;
  if (modulus) j["modulus"] = modulus;
  j["format"] = format == Format::text ? "text" : format == Format::json ? "json" : "csv";
  if (cache_dir) j["cache_dir"] = cache_dir->string();
  if (registry_file) j["registry_file"] = registry_file->string();
  return j;
}

json run_suite(const SuiteConfig& cfg) {
  Registry reg = builtin_registry();
  if (cfg.registry_file) reg.load_file(*cfg.registry_file);

  std::vector<std::function<json()>> tasks;

  if (selected(cfg.suite, "identities")) {
    std::vector<const IdentityCase*> picked;
    if (cfg.ids.empty()) {
      for (const auto& c : reg.identities()) picked.push_back(&c);
    } else {
      for (const auto& k : cfg.ids) picked.push_back(&reg.identity(k));
    }
    for (const auto* c : picked) {
      tasks.push_back([c, &cfg] {
        IdentityCase run = *c;
        if (cfg.modulus && run.modulus == 0) run.modulus = cfg.modulus;
        return identity_case(*c, verify(run, cfg.order));
      });
    }
  }

  if (selected(cfg.suite, "chains")) {
    std::vector<const ProofChain*> picked;
    if (cfg.chains.empty()) {
      for (const auto& c : reg.chains()) picked.push_back(&c);
    } else {
      for (const auto& k : cfg.chains) picked.push_back(&reg.chain(k));
    }
    for (const auto* c : picked) {
      tasks.push_back([c, &cfg, &reg] { return chain_case(*c, replay(*c, cfg.order, reg)); });
    }
  }

  std::optional<TableProvider> tables;
  if (selected(cfg.suite, "families")) {
    std::vector<const CongruenceFamily*> picked;
    if (cfg.families.empty()) {
      for (const auto& f : builtin_families()) picked.push_back(&f);
    } else {
      for (const auto& k : cfg.families) {
        auto hits = find_families(k);
        if (hits.empty()) throw Error(Errc::not_found, "no family '" + k + "'");
        picked.insert(picked.end(), hits.begin(), hits.end());
      }
    }
    tables.emplace(cfg.cache_dir ? cfg.cache_dir : TableCache::from_env());
    for (const auto* f : picked) reserve_tables(*f, *tables, cfg.n_max);
    for (const auto* f : picked) {
      tasks.push_back([f, &cfg, &tables] {
        try {
          return family_case(*f, verify_family(*f, *tables, cfg.n_max));
        } catch (const std::exception& e) {
          return error_case(f->id, "family", e.what());
        }
      });
    }
  }

  json cases = json::array();
  for (auto& c : run_all(tasks, cfg.jobs)) cases.push_back(std::move(c));
  json report{{"suite", cfg.suite}, {"cases", cases}, {"summary", summarize(cases)}};
  report["config"] = cfg.to_json();
  report["config"].erase("format");
  return report;
}

json summarize(const json& cases) {
  json s{{"total", 0}, {"pass", 0}, {"failures", 0}, {"skipped", 0}, {"refuted", 0}, {"erratum_candidate", 0}};
  json by = json::object();
  double ms = 0;
  for (const auto& c : cases) {
    const std::string st = c.at("status").get<std::string>();
    by[st] = by.value(st, 0) + 1;
    s["total"] = s["total"].get<int>() + 1;
    if (st == "pass") s["pass"] = s["pass"].get<int>() + 1;
    if (st == "mismatch" || st == "fail" || st == "error") s["failures"] = s["failures"].get<int>() + 1;
    if (st == "skipped") s["skipped"] = s["skipped"].get<int>() + 1;
    if (st == "refuted") s["refuted"] = s["refuted"].get<int>() + 1;
    if (st == "erratum-candidate") s["erratum_candidate"] = s["erratum_candidate"].get<int>() + 1;
    ms += c.value("runtime_ms", 0.0);
  }
  s["by_status"] = by;
  s["runtime_ms"] = ms;
  return s;
}

int exit_code(const json& report) { return report.at("summary").at("failures").get<int>() == 0 ? 0 : 1; }

std::string render(const json& report, Format f) {
  if (f == Format::json) return report.dump(2) + "\n";
  std::ostringstream os;
  if (f == Format::csv) {
    os << "kind,id,item,status,range,first_mismatch,detail,runtime_ms\n";
    for (const auto& c : report.at("cases")) {
      const std::string kind = c.at("kind");
      const std::string id = c.at("id");
      std::string range;
      if (c.contains("order")) range = "order " + str(c, "order");
      std::string mm;
      if (c.contains("first_mismatch")) mm = c["first_mismatch"].dump();
      os << kind << "," << csv_field(id) << ",," << c.at("status").get<std::string>() << "," << csv_field(range) << ","
         << csv_field(mm) << "," << csv_field(str(c, "message")) << "," << c.value("runtime_ms", 0.0) << "\n";
      if (c.contains("stages")) {
        for (const auto& s : c["stages"]) {
          std::string srange = s.contains("surviving") ? "surviving " + str(s, "surviving") : "";
          os << "stage," << csv_field(id) << "," << csv_field(s.at("label")) << "," << s.at("status").get<std::string>()
             << "," << csv_field(srange) << ","
             << csv_field(s.contains("first_mismatch") ? s["first_mismatch"].dump() : "") << ","
             << csv_field(s.at("step")) << ",\n";
        }
      }
      if (c.contains("params")) {
        for (const auto& p : c["params"]) {
          std::string prange = "n<=" + p["n_range"][1].dump() + " max index " + p.at("max_index").get<std::string>();
          std::string v = p["violations"].empty() ? "" : p["violations"][0].dump();
          os << "instance," << csv_field(id) << "," << csv_field(p.at("params")) << ","
             << p.at("status").get<std::string>() << "," << csv_field(prange) << "," << csv_field(v) << ","
             << csv_field(str(p, "message")) << ",\n";
        }
      }
    }
    return os.str();
  }

  std::string last_kind;
  for (const auto& c : report.at("cases")) {
    const std::string kind = c.at("kind");
    if (kind != last_kind) {
      os << (last_kind.empty() ? "" : "\n") << (kind == "identity" ? "identities" : kind == "chain" ? "chains" : "families")
         << "\n";
      last_kind = kind;
    }
    os << "  " << std::left << std::setw(18) << c.at("status").get<std::string>() << std::setw(28)
       << c.at("id").get<std::string>();
    if (kind == "identity") {
      os << "order " << str(c, "order") << " " << str(c, "mode");
    } else if (kind == "chain") {
      os << "order " << str(c, "order") << ", " << str(c, "asserted") << " stages, min surviving "
         << str(c, "min_surviving");
    } else if (kind == "family" && c.contains("checked")) {
      os << "mod " << str(c, "modulus") << ", " << str(c, "checked") << " values";
      if (c.contains("reading")) os << ", reading: " << str(c, "reading");
    }
    os << "  " << fmt_ms(c.value("runtime_ms", 0.0)) << "\n";
    if (c.contains("message")) os << "      " << str(c, "message") << "\n";
    if (c.contains("first_mismatch") && kind == "identity") {
      const auto& m = c["first_mismatch"];
      os << "      first mismatch at q^" << m["index"] << ": " << str(m, "lhs") << " vs " << str(m, "rhs") << "\n";
    }
    if (c.contains("stages")) {
      for (const auto& s : c["stages"]) {
        const std::string st = s.at("status");
        const bool asserted = s.contains("surviving");
        if (!asserted && st == "pass") continue;
        os << "      " << std::setw(18) << st << std::setw(8) << s.at("label").get<std::string>();
        if (asserted) os << s["surviving"] << " coefficients";
        if (s.contains("first_mismatch")) {
          const auto& m = s["first_mismatch"];
          os << ", first mismatch at q^" << m["index"] << ": " << str(m, "lhs") << " vs " << str(m, "rhs");
        }
        if (s.contains("message") && !s.contains("first_mismatch")) os << ", " << str(s, "message");
        os << "\n";
      }
    }
    if (c.contains("params")) {
      for (const auto& p : c["params"]) {
        const std::string name = p.at("params");
        os << "      " << std::setw(18) << p.at("status").get<std::string>() << std::setw(14)
           << (name.empty() ? "-" : name) << "n <= " << p["n_range"][1] << ", max index "
           << p.at("max_index").get<std::string>();
        if (p["violation_count"].get<std::size_t>() > 0) {
          const auto& v = p["violations"][0];
          os << ", " << p["violation_count"] << " violations, first n=" << v["n"] << " (" << v["got"] << " vs "
             << v["expected"] << ")";
        }
        os << "\n";
        if (p.contains("message")) os << "        " << str(p, "message") << "\n";
      }
    }
  }
  const auto& s = report.at("summary");
  os << "\nsummary: " << s["total"] << " cases, " << s["pass"] << " pass, " << s["failures"] << " failures, "
     << s["skipped"] << " skipped, " << s["refuted"] << " refuted, " << s["erratum_candidate"]
     << " erratum candidates (" << fmt_ms(s.value("runtime_ms", 0.0)) << ")\n";
  return os.str();
}

}  // namespace qbip
