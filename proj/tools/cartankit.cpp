// Command-line front end over the C interface.
//
// Exit status: 0 if every check passed, 1 if any check failed, 2 on bad input.
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cartankit.h"

namespace {

struct Overrides {
  std::map<std::string, std::string> values;  // setting key -> flag text
  bool test_mode = false;
  std::string format = "table";
};

int report_error(ck_status s) {
  std::fprintf(stderr, "cartankit: %s: %s\n", ck_status_string(s), ck_last_error());
  return 2;
}

int run(const std::string& command, const std::string& file, const std::vector<std::string>& args,
        const Overrides& o) {
  ck_problem* p = nullptr;
  if (ck_status s = ck_problem_load_file(file.c_str(), &p); s != CK_OK) return report_error(s);
  for (auto& [k, v] : o.values)
    if (ck_status s = ck_problem_set(p, k.c_str(), v.c_str()); s != CK_OK) {
      ck_problem_free(p);
      return report_error(s);
    }
  if (o.test_mode) ck_problem_set(p, "test_mode", "1");

  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  ck_report* r = nullptr;
  ck_status s = ck_run(p, command.c_str(), argv.data(), argv.size(), &r);
  ck_problem_free(p);
  if (s != CK_OK) return report_error(s);

  const char* text = nullptr;
  if (o.format == "json")
    s = ck_report_json(r, &text);
  else if (o.format == "jsonl")
    s = ck_report_jsonl(r, &text);
  else
    s = ck_report_table(r, &text);
  if (s != CK_OK) {
    ck_report_free(r);
    return report_error(s);
  }
  std::fputs(text, stdout);
  const int code = ck_report_passed(r) ? 0 : 1;
  ck_report_free(r);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cartankit: Tg-representations, Chevalley-Eilenberg complexes and integration of representation forms"};
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", std::string(ck_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::string tol, order, cap, h, fd_tol, mode;
  app.add_option("--tol", tol, "tolerance for residual checks");
  app.add_option("--order", order, "Gauss-Legendre points per axis");
  app.add_option("--cap", cap, "series degree cap");
  app.add_option("--h", h, "finite-difference step");
  app.add_option("--fd-tol", fd_tol, "round-trip error tolerance");
  app.add_option("--mode", mode, "arithmetic: float or exact (overrides CARTANKIT_MODE)")
      ->check(CLI::IsMember({"float", "exact"}));
  app.add_option("--format", o.format, "output: table, json or jsonl")->check(CLI::IsMember({"table", "json", "jsonl"}));
  app.add_flag("--test-mode", o.test_mode, "zero wall times so repeated runs are bit-identical");

  std::string file;
  std::vector<std::string> args;
  std::string chosen;
  for (size_t i = 0; i < ck_command_count(); ++i) {
    const std::string name = ck_command_name(i);
    auto* sub = app.add_subcommand(name, std::string(ck_command_help(i)) + "  [" + ck_command_usage(i) + "]");
    sub->add_option("problem", file, "problem file (JSON, schema cartankit/1)")->required()->check(CLI::ExistingFile);
    sub->add_option("args", args, ck_command_usage(i));
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::pair<const char*, std::string*> flags[] = {
      {"tol", &tol}, {"order", &order}, {"cap", &cap}, {"h", &h}, {"fd_tol", &fd_tol}, {"mode", &mode}};
  for (auto& [key, val] : flags)
    if (!val->empty()) o.values[key] = *val;
  return run(chosen, file, args, o);
}
