#include <iostream>

#include <CLI11.hpp>

#include "causal/commands.hpp"

int main(int argc, char** argv) {
  using namespace causal::cli;

  CLI::App app{"Evaluate and differentiate causal stream functions"};
  app.require_subcommand(1);

  StreamOptions sopt;
  auto add_stream_flags = [&](CLI::App* cmd) {
    cmd->add_option("--expr", sopt.expr, "Program text, e.g. \"rec(mul2, 1)(s)\"");
    cmd->add_option("--bind", sopt.binds, "Input binding name=spec, e.g. s=(1,2,3;0)");
    cmd->add_option("--depth", sopt.depth, "Last entry index")->capture_default_str();
    cmd->add_flag("--json", sopt.json, "One JSON object per entry");
  };

  auto* eval = app.add_subcommand("eval", "Evaluate a program");
  add_stream_flags(eval);

  auto* diff = app.add_subcommand("diff", "Evaluate a program and its forward derivative");
  add_stream_flags(diff);
  diff->add_option("--tangent", sopt.tangents, "Tangent binding name=spec (unbound tangents are zero)");

  auto* check = app.add_subcommand("check", "Compare rule-based and finite-difference Jacobians");
  add_stream_flags(check);
  check->add_option("--fd-step", sopt.fd_step, "Central-difference step")->capture_default_str();
  check->add_option("--seed", sopt.seed, "Seed for unbound inputs")->capture_default_str();
  check->add_flag("--corpus", sopt.corpus, "Check every builtin expression");

  ElmanOptions eopt;
  auto* elman = app.add_subcommand("elman", "Scalar Elman network experiments");
  elman->require_subcommand(1);
  auto add_elman_flags = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", eopt.alpha)->capture_default_str();
    cmd->add_option("--beta", eopt.beta)->capture_default_str();
    cmd->add_option("--gamma", eopt.gamma)->capture_default_str();
    cmd->add_option("--delta", eopt.delta)->capture_default_str();
    cmd->add_option("--epsilon", eopt.epsilon)->capture_default_str();
    cmd->add_option("--act1", eopt.act1, "Hidden activation")->capture_default_str();
    cmd->add_option("--act2", eopt.act2, "Output activation")->capture_default_str();
    cmd->add_option("--input", eopt.input, "Input stream spec")->capture_default_str();
    cmd->add_option("--depth", eopt.depth, "Last entry index")->capture_default_str();
    cmd->add_option("--probe", eopt.probe, "Parameter change used for the derivative")->capture_default_str();
    cmd->add_option("--param", eopt.param, "alpha | beta | gamma | delta | epsilon")->capture_default_str();
    cmd->add_flag("--json", eopt.json);
  };
  auto* demo = elman->add_subcommand("demo", "Print the network output and its parameter tangent");
  add_elman_flags(demo);
  auto* adjust = elman->add_subcommand("adjust", "Probe a parameter and extrapolate linearly towards a target");
  add_elman_flags(adjust);
  adjust->add_option("--target-shift", eopt.target_shift, "Desired change of every entry")->capture_default_str();
  adjust->add_option("--scale-rule", eopt.scale_rule, "bound | mean")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (eval->parsed()) return cmd_eval(sopt, std::cout, std::cerr);
  if (diff->parsed()) return cmd_diff(sopt, std::cout, std::cerr);
  if (check->parsed()) return cmd_check(sopt, std::cout, std::cerr);
  if (demo->parsed()) return cmd_elman_demo(eopt, std::cout, std::cerr);
  if (adjust->parsed()) return cmd_elman_adjust(eopt, std::cout, std::cerr);
  return 1;
}
