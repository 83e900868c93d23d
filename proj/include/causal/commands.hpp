#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace causal::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,  // also malformed bindings, unknown names
  kDomainError = 3,
  kCheckFailed = 4,
};

struct StreamOptions {
  std::string expr;
  std::vector<std::string> binds;     // name=spec
  std::vector<std::string> tangents;  // name=spec
  std::uint64_t depth = 16;
  double fd_step = 1e-6;
  std::uint64_t seed = 0;
  bool json = false;
  bool corpus = false;  // check: run the builtin corpus instead of --expr
};

struct ElmanOptions {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.1;
  double delta = 1.0;
  double epsilon = -0.1;
  std::string act1 = "sigmoid";
  std::string act2 = "sigmoid";
  std::string input = "ones";
  std::uint64_t depth = 3;
  double probe = 0.1;
  double target_shift = -0.05;
  std::string param = "alpha";
  std::string scale_rule = "bound";  // bound | mean
  bool json = false;
};

/// Prints entries 0..depth of the program's output.
int cmd_eval(const StreamOptions& opt, std::ostream& out, std::ostream& err);

/// Prints primal and tangent entries 0..depth. Unbound tangents are zero.
int cmd_diff(const StreamOptions& opt, std::ostream& out, std::ostream& err);

/// Compares the rule-based Jacobian with central differences. Unbound inputs
/// get seeded uniform [-2, 2] values. Exit status 0 iff every compared entry
/// is within max(1e-5, 1e-4 * magnitude).
int cmd_check(const StreamOptions& opt, std::ostream& out, std::ostream& err);

/// Hidden state, output, and their tangents for a parameter change of `probe`.
int cmd_elman_demo(const ElmanOptions& opt, std::ostream& out, std::ostream& err);

/// One probe-then-extrapolate step on a parameter, with overshoot ratios.
int cmd_elman_adjust(const ElmanOptions& opt, std::ostream& out, std::ostream& err);

/// Fixed 5-decimal rendering, ties to even.
std::string fixed5(double x);

}  // namespace causal::cli
