// Command-line front end: config file in, CSV out.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "casimir/config.hpp"
#include "casimir/runner.hpp"

namespace {

const char* kFooter = R"(Config format: sections [run] [geometry] [plate1] [plate2] [particle] [sweep]
with 'key = value' lines; '#' starts a comment. All quantities are SI
(m, K, m/s, rad/s) except particle polarizabilities, which use the Gaussian
volume convention (m^3): alpha_SI [C m^2 / V] = 4 pi eps0 alpha, and a dilute
medium of density n has eps - 1 = 4 pi n alpha.

Exit codes: 0 success, 1 invalid input, 2 accuracy not reached,
3 verification failure.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir-Lifshitz pressure between plates at rest or in relative motion, and the Casimir-Polder force"};
  app.footer(kFooter);
  std::string config_path, mode_name, out_path;
  double tol = 0.0;
  bool verify = false;
  app.add_option("--config", config_path, "Run description file")->check(CLI::ExistingFile);
  app.add_option("--mode", mode_name, "Override [run] mode")
      ->check(CLI::IsMember({"static", "dynamic", "polder", "sweep", "verify"}));
  app.add_option("--out", out_path, "CSV destination (default: standard output)");
  app.add_option("--tol", tol, "Relative tolerance, overrides [run] tol")->check(CLI::Range(1e-12, 0.1));
  app.add_flag("--verify", verify, "Run the self-verification suite");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : casimir::exit_validation;
  }

  casimir::RunConfig config;
  if (verify || mode_name == "verify") {
    config.mode = casimir::Mode::verify;
  } else {
    if (config_path.empty()) {
      std::cerr << "error kind=invalid_config message=\"--config is required unless --verify is given\"\n";
      return casimir::exit_validation;
    }
    std::ifstream in(config_path);
    std::stringstream text;
    text << in.rdbuf();
    const casimir::ParseOutcome parsed = casimir::parse_config(text.str());
    if (!parsed.ok()) {
      for (const auto& i : parsed.issues)
        std::cerr << "error kind=invalid_config line=" << i.line << " message=\"" << i.message << "\"\n";
      return casimir::exit_validation;
    }
    config = *parsed.config;
    if (!mode_name.empty()) config.mode = *casimir::mode_from_string(mode_name);
  }
  if (tol > 0.0) config.rel_tol = tol;
  if (!out_path.empty()) config.output = out_path;

  if (config.output.empty()) return casimir::run(config, std::cout, std::cerr);
  std::ostringstream buffer;
  const int code = casimir::run(config, buffer, std::cerr);
  std::ofstream out(config.output);
  if (!out) {
    std::cerr << "error kind=io message=\"cannot write " << config.output << "\"\n";
    return casimir::exit_validation;
  }
  out << buffer.str();
  return code;
}
