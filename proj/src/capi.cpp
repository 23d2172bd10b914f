#include "qbip/qbip.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "qbip/congruences.hpp"
#include "qbip/identities.hpp"
#include "qbip/oracle.hpp"
#include "qbip/qexpr.hpp"
#include "qbip/suite.hpp"

struct qbip_expr {
  qbip::Expr e;
};

struct qbip_series {
  qbip::Series s;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
qbip_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return QBIP_OK;
  } catch (const qbip::Error& e) {
    last_error = e.what();
    return static_cast<qbip_status>(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return QBIP_PARSE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QBIP_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return QBIP_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw qbip::Error(qbip::Errc::invalid_argument, std::string(what) + " is null");
}

qbip::CoeffRing ring_for(std::uint64_t modulus) {
  return modulus ? qbip::CoeffRing::modulo(modulus) : qbip::CoeffRing::integers();
}

}  // namespace

extern "C" {

const char* qbip_version(void) { return "0.1.0"; }

const char* qbip_last_error(void) { return last_error.c_str(); }

void qbip_string_free(char* s) { std::free(s); }

qbip_status qbip_expr_parse(const char* text, qbip_expr** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new qbip_expr{qbip::parse_expr(text)};
  });
}

void qbip_expr_free(qbip_expr* e) { delete e; }

qbip_status qbip_expr_to_string(const qbip_expr* e, char** out) {
  return guarded([&] {
    need(e, "expr");
    need(out, "out");
    *out = dup(qbip::to_string(e->e));
  });
}

qbip_status qbip_series_eval(const qbip_expr* e, uint64_t modulus, size_t order, qbip_series** out) {
  return guarded([&] {
    need(e, "expr");
    need(out, "out");
    *out = new qbip_series{qbip::eval(e->e, ring_for(modulus), order)};
  });
}

void qbip_series_free(qbip_series* s) { delete s; }

size_t qbip_series_order(const qbip_series* s) { return s ? s->s.order() : 0; }

uint64_t qbip_series_modulus(const qbip_series* s) { return s ? s->s.ring().modulus() : 0; }

qbip_status qbip_series_coeff(const qbip_series* s, size_t n, char** out) {
  return guarded([&] {
    need(s, "series");
    need(out, "out");
    if (n > s->s.order()) {
      throw qbip::Error(qbip::Errc::range,
                        "q^" + std::to_string(n) + " is beyond the order " + std::to_string(s->s.order()));
    }
    *out = dup(s->s.coeff(n).get_str());
  });
}

qbip_status qbip_series_to_string(const qbip_series* s, size_t max_terms, char** out) {
  return guarded([&] {
    need(s, "series");
    need(out, "out");
    *out = dup(qbip::to_string(s->s, max_terms));
  });
}

qbip_status qbip_bipartition_coeff(int64_t l, int64_t m, size_t n, uint64_t modulus, char** out) {
  return guarded([&] {
    need(out, "out");
    if (modulus == 1) throw qbip::Error(qbip::Errc::invalid_argument, "modulus must be at least 2");
    if (modulus && modulus < (1ULL << 32)) {
      *out = dup(std::to_string(qbip::coeff_fast(l, m, n, modulus).residue(n, modulus)));
    } else {
      *out = dup(qbip::bipartition_counts(l, m, n, ring_for(modulus)).at(n).get_str());
    }
  });
}

qbip_status qbip_regular_coeff(int64_t l, size_t n, uint64_t modulus, char** out) {
  return guarded([&] {
    need(out, "out");
    if (modulus == 1) throw qbip::Error(qbip::Errc::invalid_argument, "modulus must be at least 2");
    if (modulus && modulus < (1ULL << 32)) {
      *out = dup(std::to_string(qbip::regular_fast(l, n, modulus).residue(n, modulus)));
    } else {
      *out = dup(qbip::regular_counts(l, n, ring_for(modulus)).at(n).get_str());
    }
  });
}

qbip_status qbip_run_suite(const char* config_json, char** report_json, int* exit_code) {
  return guarded([&] {
    need(report_json, "report_json");
    auto cfg = qbip::SuiteConfig::from_json(
        config_json && *config_json ? nlohmann::json::parse(config_json) : nlohmann::json::object());
    auto report = qbip::run_suite(cfg);
    if (exit_code) *exit_code = qbip::exit_code(report);
    *report_json = dup(report.dump());
  });
}

qbip_status qbip_render_report(const char* report_json, const char* format, char** out) {
  return guarded([&] {
    need(report_json, "report_json");
    need(out, "out");
    auto f = qbip::parse_format(format ? format : "text");
    *out = dup(qbip::render(nlohmann::json::parse(report_json), f));
  });
}

qbip_status qbip_list(char** out) {
  return guarded([&] {
    need(out, "out");
    const auto& reg = qbip::builtin_registry();
    nlohmann::json j{{"identities", nlohmann::json::array()},
                     {"chains", nlohmann::json::array()},
                     {"families", nlohmann::json::array()}};
    for (const auto& c : reg.identities()) {
      j["identities"].push_back({{"id", c.id},
                                 {"label", c.label},
                                 {"section", c.section},
                                 {"hash", c.content_hash()},
                                 {"modulus", c.modulus},
                                 {"order", c.default_order},
                                 {"lhs", qbip::to_string(c.lhs)},
                                 {"rhs", qbip::to_string(c.rhs)}});
    }
    for (const auto& c : reg.chains()) {
      j["chains"].push_back({{"id", c.id}, {"title", c.title}, {"proves", c.proves}, {"steps", c.steps.size()}});
    }
    for (const auto& f : qbip::builtin_families()) {
      j["families"].push_back(
          {{"id", f.id}, {"title", f.title}, {"statement", f.statement}, {"modulus", f.p}, {"instances", f.instances.size()}});
    }
    *out = dup(j.dump());
  });
}

}  // extern "C"
