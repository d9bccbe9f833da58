#include <doctest.h>

#include <sstream>
#include <string>

#include "casimir/config.hpp"
#include "casimir/runner.hpp"

using namespace casimir;

namespace {

const char* kStatic = R"([run]
mode = static

[geometry]
gap = 1e-6

[plate1]
kind = ideal_metal

[plate2]
kind = ideal_metal
)";

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const ParseOutcome r = parse_config(kStatic);
  REQUIRE(r.ok());
  CHECK(r.config->mode == Mode::static_force);
  CHECK(r.config->static_route == StaticRoute::matsubara);
  CHECK(r.config->temperature == 300.0);
  CHECK(r.config->rel_tol == 1e-3);
  CHECK(r.config->gap == 1e-6);
}

TEST_CASE("negative gap names key and line") {
  std::string text = kStatic;
  text.replace(text.find("gap = 1e-6"), 10, "gap = -1");
  const ParseOutcome r = parse_config(text);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.issues.size() == 1);
  CHECK(r.issues[0].line == 5);
  CHECK(r.issues[0].message.find("gap") != std::string::npos);
}

TEST_CASE("all errors are reported") {
  const ParseOutcome r = parse_config(R"([run]
mode = static
colour = blue

[geometry]
gap = abc

[plate1]
kind = unobtainium
[plate2]
kind = drude
)");
  REQUIRE_FALSE(r.ok());
  CHECK(r.issues.size() >= 3);
  for (std::size_t i = 1; i < r.issues.size(); ++i) CHECK(r.issues[i - 1].line <= r.issues[i].line);
  CHECK(r.issues[0].line == 3);
}

TEST_CASE("round trip") {
  const char* texts[] = {
      kStatic,
      R"([run]
mode = sweep
tol = 2e-3
[geometry]
temperature = 77.5
velocity = 3000
[plate1]
kind = lorentz
oscillators = 3:1e14:3e13, 0.5:2e15:1e14
[plate2]
kind = constant
eps = 4.5
cutoff = 1e15
[sweep]
target = dynamic
variable = l
from = 1e-7
to = 3e-7
points = 3
spacing = log
)",
      R"([run]
mode = polder
route = finite_difference
[geometry]
separation = 1.5e-7
velocity = 1234.5
[plate2]
kind = drude
plasma_frequency = 2e14
damping = 5e13
[particle]
alpha_e = lorentz
alpha_e_oscillators = 1e-30:1e14:2e13
alpha_m = constant
alpha_m_value = 1e-33
alpha_m_cutoff = 1e15
density = 1e20
)"};
  for (const char* t : texts) {
    const ParseOutcome a = parse_config(t);
    REQUIRE(a.ok());
    const ParseOutcome b = parse_config(serialize_config(*a.config));
    REQUIRE(b.ok());
    CHECK(*a.config == *b.config);
  }
}

TEST_CASE("sweep rows and finite cells") {
  const ParseOutcome r = parse_config(R"([run]
mode = sweep
route = matsubara
[geometry]
temperature = 300
[plate1]
kind = drude
plasma_frequency = 2e14
damping = 5e13
[plate2]
kind = ideal_metal
[sweep]
target = static
variable = l
from = 1e-7
to = 1e-6
points = 10
spacing = log
)");
  REQUIRE(r.ok());
  std::ostringstream out, diag;
  CHECK(run(*r.config, out, diag) == exit_success);
  CHECK(count_lines(out.str()) == 11);
  CHECK(out.str().find("nan") == std::string::npos);
  CHECK(out.str().find("inf") == std::string::npos);
}

TEST_CASE("failing rows become error rows") {
  // ideal metal on the real-frequency route is rejected per row
  const ParseOutcome r = parse_config(R"([run]
mode = static
route = loop
[geometry]
gap = 1e-7
[plate1]
kind = ideal_metal
[plate2]
kind = ideal_metal
)");
  REQUIRE(r.ok());
  std::ostringstream out, diag;
  CHECK(run(*r.config, out, diag) != exit_success);
  CHECK(out.str().find("error:") != std::string::npos);
  CHECK(diag.str().find("kind=") != std::string::npos);
}

TEST_CASE("ideal metal static run") {
  std::ostringstream out, diag;
  RunConfig c = *parse_config(kStatic).config;
  c.temperature = 0.0;
  REQUIRE(run(c, out, diag) == exit_success);
  const std::string s = out.str();
  const double p = std::stod(s.substr(s.find('\n') + 1));
  CHECK(p == doctest::Approx(-1.30e-3).epsilon(5e-3));
}

TEST_CASE("csv numbers") {
  CHECK(csv_number(-1.3001252406612e-3) == "-1.30012524066e-03");
  CHECK(csv_number(0.0) == "0.00000000000e+00");
}
