#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace singtrace {

/// One verdict: a named case with the numbers it was decided on.
struct CheckCase {
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> values;
  std::string note;
};

struct CheckSuite {
  std::string name;
  std::vector<CheckCase> cases;
  bool pass() const;
  std::size_t failures() const;
};

struct CheckOptions {
  std::uint64_t seed = 20260101;
  /// 0 keeps each case's own tolerance
  double tolerance = 0.0;
};

/// thm44, thm47, thm51, prop52, karamata, intertwine, holder, galois, norms
const std::vector<std::string>& check_suite_names();
CheckSuite run_check(const std::string& suite, const CheckOptions& options = {});

CheckSuite check_thm44(const CheckOptions& options = {});
CheckSuite check_thm47(const CheckOptions& options = {});
CheckSuite check_thm51(const CheckOptions& options = {});
CheckSuite check_prop52(const CheckOptions& options = {});
CheckSuite check_karamata(const CheckOptions& options = {});
CheckSuite check_intertwine(const CheckOptions& options = {});
CheckSuite check_holder(const CheckOptions& options = {});
CheckSuite check_galois(const CheckOptions& options = {});
CheckSuite check_norms(const CheckOptions& options = {});

}  // namespace singtrace
