#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace kpkit::testutil {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

// Runs the kpkit executable; stderr goes through a scratch file.
inline RunResult run_cli(const std::vector<std::string>& args, const std::string& stdin_text = {}) {
  static TempDir scratch;
  static int counter = 0;
  auto err_path = scratch / ("stderr" + std::to_string(counter++));
  std::string cmd = shell_quote(KPKIT_CLI);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  if (!stdin_text.empty()) cmd = "printf '%s' " + shell_quote(stdin_text) + " | " + cmd;
  else cmd += " </dev/null";
  cmd += " 2>" + shell_quote(err_path.string());
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = read_file(err_path);
  return r;
}

}  // namespace kpkit::testutil
