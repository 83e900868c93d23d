#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "causal/commands.hpp"
#include "causal/corpus.hpp"
#include "causal/dsl.hpp"

using namespace causal;
using namespace causal::cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <class Opt>
Run run(int (*cmd)(const Opt&, std::ostream&, std::ostream&), const Opt& opt) {
  std::ostringstream out, err;
  const int code = cmd(opt, out, err);
  return {code, out.str(), err.str()};
}

StreamOptions stream_opts(std::string expr, std::vector<std::string> binds, std::uint64_t depth) {
  StreamOptions o;
  o.expr = std::move(expr);
  o.binds = std::move(binds);
  o.depth = depth;
  return o;
}

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(json::parse(line));
  return out;
}

// Column `col` of the human table, one entry per data row.
std::vector<std::string> column(const std::string& text, std::size_t col) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string f;
    for (std::size_t i = 0; i <= col; ++i) std::getline(fields, f, '\t');
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("fixed5") {
  CHECK(fixed5(0.657071) == "0.65707");
  CHECK(fixed5(-1.0) == "-1.00000");
  CHECK(fixed5(-1e-9) == "0.00000");
  CHECK(fixed5(24.0) == "24.00000");
}

TEST_CASE("eval") {
  Run r = run(cmd_eval, stream_opts("rec(mul2,1)(s)", {"s=(1,2,3,4;0)"}, 3));
  CHECK(r.code == kOk);
  CHECK(column(r.out, 1) == std::vector<std::string>{"1.00000", "2.00000", "6.00000", "24.00000"});

  r = run(cmd_eval, stream_opts("[1] * s", {"s=ones"}, 3));
  CHECK(column(r.out, 1) == std::vector<std::string>{"1.00000", "1.00000", "1.00000", "1.00000"});

  r = run(cmd_eval, stream_opts("inv(s)", {"s=ones"}, 3));
  CHECK(column(r.out, 1) == std::vector<std::string>{"1.00000", "-1.00000", "0.00000", "0.00000"});
}

TEST_CASE("machine output round-trips exactly") {
  const std::string src = "map(elman2(1, -0.1))(rec(elman1(1, 1, 0.1), 0)(s)) + inv([3] + 0.1 t)";
  StreamOptions o = stream_opts(src, {"s=(0.1, 0.7, -1.3; 0.3)", "t=(1, 2, 3)"}, 16);
  o.json = true;
  const Run r = run(cmd_eval, o);
  REQUIRE(r.code == kOk);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 17);

  const dsl::Program p = dsl::parse(src);
  const Stream in = zip(dsl::parse_stream_spec("(0.1, 0.7, -1.3; 0.3)").to_stream(),
                        dsl::parse_stream_spec("(1, 2, 3)").to_stream());
  const Stream expected = eval_expr(p.expr, in);
  for (std::uint64_t k = 0; k <= 16; ++k) {
    CHECK(lines[k]["index"].get<std::uint64_t>() == k);
    CHECK(lines[k]["values"][0].get<double>() == expected.scalar(k));
  }
}

TEST_CASE("diff") {
  StreamOptions o = stream_opts("s + t", {"s=(1,2;3)", "t=X"}, 4);
  o.tangents = {"s=(0.5, 0.25)", "t=(1;-1)"};
  o.json = true;
  Run r = run(cmd_diff, o);
  REQUIRE(r.code == kOk);
  const auto lines = json_lines(r.out);
  const std::vector<double> expected{1.5, -0.75, -1, -1, -1};
  for (std::size_t k = 0; k < lines.size(); ++k) CHECK(lines[k]["tangents"][0].get<double>() == expected[k]);

  r = run(cmd_diff, stream_opts("[3]", {}, 3));
  CHECK(column(r.out, 3) == std::vector<std::string>{"0.00000", "0.00000", "0.00000", "0.00000"});

  o = stream_opts("rec(mul2,1)(s)", {"s=(1,2,3,4;0)"}, 3);
  o.tangents = {"s=(1,0,0,0;0)"};
  r = run(cmd_diff, o);
  CHECK(column(r.out, 3) == std::vector<std::string>{"1.00000", "2.00000", "6.00000", "24.00000"});
}

TEST_CASE("check") {
  StreamOptions o = stream_opts("s * t", {}, 16);
  o.fd_step = 1e-3;
  o.seed = 4;
  o.json = true;
  Run r = run(cmd_check, o);
  CHECK(r.code == kOk);
  CHECK(json_lines(r.out).at(0)["max_abs_err"].get<double>() < 1e-10);

  o = stream_opts("inv(s)", {"s=(1,1,1;1)"}, 16);
  o.json = true;
  r = run(cmd_check, o);
  CHECK(r.code == kOk);
  CHECK(json_lines(r.out).at(0)["max_abs_err"].get<double>() < 1e-5);

  o = stream_opts("map(relu)(s)", {"s=(1, -1, 0, 2; 1)"}, 8);
  r = run(cmd_check, o);
  CHECK(r.code == kOk);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.err.find("entry 2") != std::string::npos);
  CHECK(r.out.find("skipped") != std::string::npos);

  o = StreamOptions{};
  o.corpus = true;
  o.depth = 8;
  r = run(cmd_check, o);
  CHECK(r.code == kOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == builtin_corpus().size());
}

TEST_CASE("error reporting") {
  Run r = run(cmd_eval, stream_opts("s +", {}, 3));
  CHECK(r.code == kParseError);
  CHECK(r.err.find("line 1, column 4") != std::string::npos);

  r = run(cmd_eval, stream_opts("s +\n inv(s)", {"s=X"}, 3));
  CHECK(r.code == kDomainError);
  CHECK(r.err.find("line 2, column 2") != std::string::npos);

  r = run(cmd_eval, stream_opts("map(softplus)(s)", {}, 3));
  CHECK(r.code == kParseError);

  r = run(cmd_eval, stream_opts("s", {"u=ones"}, 3));
  CHECK(r.code == kParseError);

  r = run(cmd_eval, stream_opts("s", {"s=(1,"}, 3));
  CHECK(r.code == kParseError);

  StreamOptions o = stream_opts("inv(s)", {"s=(1e-6; 1)"}, 2);
  r = run(cmd_check, o);
  CHECK(r.code == kDomainError);
  CHECK(r.err.find("perturbation") != std::string::npos);
}

TEST_CASE("elman demo") {
  Run r = run(cmd_elman_demo, ElmanOptions{});
  REQUIRE(r.code == kOk);
  CHECK(column(r.out, 2) == std::vector<std::string>{"0.65707", "0.68226", "0.68503", "0.68533"});
  CHECK(column(r.out, 4) == std::vector<std::string>{"0.00422", "0.00302", "0.00265", "0.00259"});

  ElmanOptions o;
  o.depth = 0;
  o.json = true;
  r = run(cmd_elman_demo, o);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 1);
  const double rho0 = 1.0 / (1.0 + std::exp(-1.1));
  CHECK(lines[0]["values"][0].get<double>() == doctest::Approx(rho0).epsilon(1e-15));
  CHECK(lines[0]["values"][1].get<double>() == doctest::Approx(1.0 / (1.0 + std::exp(-(rho0 - 0.1)))).epsilon(1e-15));

  o = ElmanOptions{};
  o.act1 = "softplus";
  r = run(cmd_elman_demo, o);
  CHECK(r.code == kParseError);
  CHECK(r.err.find("softplus") != std::string::npos);

  o = ElmanOptions{};
  o.param = "zeta";
  CHECK(run(cmd_elman_demo, o).code == kParseError);
}

TEST_CASE("elman adjust") {
  ElmanOptions o;
  o.json = true;
  Run r = run(cmd_elman_adjust, o);
  REQUIRE(r.code == kOk);
  const json j = json::parse(r.out);
  CHECK(j["probe"]["value"].get<double>() == doctest::Approx(0.9));
  CHECK(j["step"]["value"].get<double>() == 0.0);
  CHECK(j["step"]["scale"].get<double>() == doctest::Approx(10.0));
  CHECK(j["step"]["overshoot"].size() == 4);

  o.json = false;
  r = run(cmd_elman_adjust, o);
  CHECK(r.out.find("alpha -> 0\n") != std::string::npos);
  CHECK(r.out.find("0.60467\t0.63445\t0.64095\t0.64235") != std::string::npos);
  CHECK(r.out.find("0.65273\t0.67908\t0.68224\t0.68261") != std::string::npos);

  o.probe = 0.0;
  r = run(cmd_elman_adjust, o);
  CHECK(r.code == kDomainError);
  CHECK(r.err.find("gradient vanishes at probe") != std::string::npos);

  o = ElmanOptions{};
  o.scale_rule = "median";
  CHECK(run(cmd_elman_adjust, o).code == kParseError);
}
