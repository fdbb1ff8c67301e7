#include "cartankit.h"

#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "cartankit/commands.hpp"

struct ck_problem {
  cartankit::json doc;
  cartankit::Settings settings;
};

struct ck_report {
  cartankit::Report report;
  std::string json, jsonl, table;  // rendered on first request
};

namespace {

thread_local std::string last_error;

ck_status fail(ck_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

/// Maps exceptions from the core to status codes.
template <class F>
ck_status guarded(F&& f) {
  using namespace cartankit;
  try {
    last_error.clear();
    f();
    return CK_OK;
  } catch (const UsageError& e) {
    return fail(CK_ERR_USAGE, e.what());
  } catch (const ProblemError& e) {
    return fail(CK_ERR_PROBLEM, e.what());
  } catch (const json::exception& e) {
    return fail(CK_ERR_PROBLEM, std::string("malformed problem: ") + e.what());
  } catch (const NonTerminatingError& e) {
    return fail(CK_ERR_NUMERIC, e.what());
  } catch (const ShapeError& e) {
    return fail(CK_ERR_PROBLEM, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CK_ERR_PROBLEM, e.what());
  } catch (const std::exception& e) {
    return fail(CK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CK_ERR_INTERNAL, "unknown error");
  }
}

ck_status load(const std::string& text, ck_problem** out) {
  cartankit::json doc;
  try {
    doc = cartankit::read_problem_text(text);
  } catch (const cartankit::ProblemError& e) {
    return fail(CK_ERR_PARSE, e.what());
  }
  return guarded([&] {
    auto p = std::make_unique<ck_problem>();
    p->settings = cartankit::effective_settings(doc);
    p->doc = std::move(doc);
    *out = p.release();
  });
}

ck_status run(const ck_problem* p, const std::string& cmd, std::vector<std::string> args, ck_report** out) {
  if (!p || !out) return fail(CK_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<ck_report>();
    r->report = cartankit::run_command(p->doc, p->settings, cmd, args);
    *out = r.release();
  });
}

bool null_arg(std::initializer_list<const void*> ps) {
  for (auto* q : ps)
    if (!q) return true;
  return false;
}

ck_status render(const ck_report* r, std::string ck_report::*slot, std::string (*f)(const cartankit::Report&),
                 const char** out) {
  if (!r || !out) return fail(CK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::string& s = const_cast<ck_report*>(r)->*slot;
    if (s.empty()) s = f(r->report);
    *out = s.c_str();
  });
}

}  // namespace

extern "C" {

const char* ck_version(void) { return "1.0.0"; }

const char* ck_status_string(ck_status s) {
  switch (s) {
    case CK_OK: return "ok";
    case CK_ERR_ARGUMENT: return "invalid argument";
    case CK_ERR_IO: return "I/O error";
    case CK_ERR_PARSE: return "parse error";
    case CK_ERR_PROBLEM: return "invalid problem";
    case CK_ERR_USAGE: return "usage error";
    case CK_ERR_NUMERIC: return "numerical error";
    case CK_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ck_last_error(void) { return last_error.c_str(); }

ck_status ck_problem_load_file(const char* path, ck_problem** out) {
  if (null_arg({path, out})) return fail(CK_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(CK_ERR_IO, std::string("cannot open problem file '") + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load(text, out);
}

ck_status ck_problem_load_json(const char* text, ck_problem** out) {
  if (null_arg({text, out})) return fail(CK_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return load(text, out);
}

void ck_problem_free(ck_problem* p) { delete p; }

ck_status ck_problem_set(ck_problem* p, const char* key, const char* value) {
  if (null_arg({p, key, value})) return fail(CK_ERR_ARGUMENT, "null argument");
  return guarded([&] { p->settings.set(key, value); });
}

size_t ck_command_count(void) { return cartankit::command_table().size(); }
const char* ck_command_name(size_t i) {
  return i < ck_command_count() ? cartankit::command_table()[i].name.c_str() : nullptr;
}
const char* ck_command_usage(size_t i) {
  return i < ck_command_count() ? cartankit::command_table()[i].args.c_str() : nullptr;
}
const char* ck_command_help(size_t i) {
  return i < ck_command_count() ? cartankit::command_table()[i].help.c_str() : nullptr;
}

ck_status ck_run(const ck_problem* p, const char* command, const char* const* args, size_t nargs, ck_report** out) {
  if (!command || (nargs && !args)) return fail(CK_ERR_ARGUMENT, "null argument");
  std::vector<std::string> a;
  for (size_t i = 0; i < nargs; ++i) {
    if (!args[i]) return fail(CK_ERR_ARGUMENT, "null command argument");
    a.emplace_back(args[i]);
  }
  return run(p, command, std::move(a), out);
}

ck_status ck_check_lie(const ck_problem* p, ck_report** out) { return run(p, "check-lie", {}, out); }

ck_status ck_verify_cartan(const ck_problem* p, const char* rep, ck_report** out) {
  if (!rep) return fail(CK_ERR_ARGUMENT, "null argument");
  return run(p, "verify-cartan", {rep}, out);
}

ck_status ck_ce(const ck_problem* p, const char* rep, const char* flavor, const char* expected, ck_report** out) {
  if (!rep) return fail(CK_ERR_ARGUMENT, "null argument");
  std::vector<std::string> a{rep, flavor ? flavor : "cochain"};
  if (expected && *expected) a.emplace_back(expected);
  return run(p, "ce", a, out);
}

ck_status ck_integrate(const ck_problem* p, const char* rep, const char* word, const char* method, ck_report** out) {
  if (null_arg({rep, word})) return fail(CK_ERR_ARGUMENT, "null argument");
  return run(p, "integrate", {rep, word, method ? method : "both"}, out);
}

ck_status ck_verify_module(const ck_problem* p, const char* rep, const char* const* words, size_t nwords,
                           ck_report** out) {
  if (!rep || (nwords && !words)) return fail(CK_ERR_ARGUMENT, "null argument");
  std::vector<std::string> a{rep};
  for (size_t i = 0; i < nwords; ++i) {
    if (!words[i]) return fail(CK_ERR_ARGUMENT, "null word name");
    a.emplace_back(words[i]);
  }
  return run(p, "verify-module", a, out);
}

ck_status ck_roundtrip(const ck_problem* p, const char* rep, ck_report** out) {
  if (!rep) return fail(CK_ERR_ARGUMENT, "null argument");
  return run(p, "roundtrip", {rep}, out);
}

ck_status ck_adjunction(const ck_problem* p, const char* grep, const char* tgrep, ck_report** out) {
  if (null_arg({grep, tgrep})) return fail(CK_ERR_ARGUMENT, "null argument");
  return run(p, "adjunction", {grep, tgrep}, out);
}

ck_status ck_cubical(const ck_problem* p, const char* rep, const char* word, ck_report** out) {
  if (null_arg({rep, word})) return fail(CK_ERR_ARGUMENT, "null argument");
  return run(p, "cubical", {rep, word}, out);
}

int ck_report_passed(const ck_report* r) { return r && r->report.passed() ? 1 : 0; }

size_t ck_report_check_count(const ck_report* r) { return r ? r->report.checks.size() : 0; }

ck_status ck_report_json(const ck_report* r, const char** out) {
  return render(r, &ck_report::json, [](const cartankit::Report& x) { return x.to_json().dump(2) + "\n"; }, out);
}

ck_status ck_report_jsonl(const ck_report* r, const char** out) {
  return render(r, &ck_report::jsonl, [](const cartankit::Report& x) { return x.jsonl(); }, out);
}

ck_status ck_report_table(const ck_report* r, const char** out) {
  return render(r, &ck_report::table, [](const cartankit::Report& x) { return x.table(); }, out);
}

void ck_report_free(ck_report* r) { delete r; }

}  // extern "C"
