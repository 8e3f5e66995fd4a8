#include <string>

#include "bvpair/error.hpp"
#include "bvpair/scenario.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bvpair;
using testing::fixture;

namespace {

const char* kMinimal = R"(
name = "mini"
seed = 1
[domain]
lo = -1.0
hi = 1.0
[field]
kind = "separated"
T = 2.0
[[field.terms]]
g = "1"
A = {ac = "x"}
[u]
jumps = [{x = 0.0, size = 0.5}]
[[phi]]
name = "p"
center = 0.0
radius = 0.5
)";

ErrorCode code_of(const std::string& text, bool strict = false) {
  try {
    Scenario sc = parse_scenario_string(text, "<test>", strict);
    build_scenario(sc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;  // sentinel: no error
}

}  // namespace

TEST_CASE("fixtures parse") {
  const Scenario sc = fixture("s2_sign_linear.toml");
  CHECK(sc.name == "S2");
  CHECK(sc.u->jumps().size() == 2);
  CHECK(sc.phi.size() >= 3);
}

TEST_CASE("round trip through the normalized form") {
  for (const char* file : {"s1_autonomous.toml", "s2_sign_linear.toml", "s3_sign_nonlinear.toml", "s4_cantor.toml",
                           "s5_tensor.toml", "s6_smooth.toml"}) {
    CAPTURE(file);
    const Scenario a = fixture(file);
    const std::string text = to_toml(a);
    Scenario b = parse_scenario_string(text);
    build_scenario(b);
    CHECK(to_toml(b) == text);
    CHECK(b.seed == a.seed);
    CHECK(b.u->total_variation() == a.u->total_variation());
    for (double x : {-0.7, 0.0, 0.25, 0.5, 1.0})
      CHECK(b.field->B(x, Side::Right, 0.6) == a.field->B(x, Side::Right, 0.6));
    const PairingContext& ca = *a.ctx;
    const PairingContext& cb = *b.ctx;
    CHECK(measure_pair(ca.internal(ca.constant(0.4)).measure, a.phi.front(), ca.opt()) ==
          measure_pair(cb.internal(cb.constant(0.4)).measure, b.phi.front(), cb.opt()));
  }
}

TEST_CASE("validation and parse errors") {
  CHECK(code_of(kMinimal) == ErrorCode::InvalidArgument);

  std::string t_range = kMinimal;
  t_range.replace(t_range.find("T = 2.0"), 7, "T = 1.2");
  CHECK(code_of(t_range) == ErrorCode::TRange);

  std::string bad_expr = kMinimal;
  bad_expr.replace(bad_expr.find("g = \"1\""), 7, "g = \"1 + * t\"");
  CHECK(code_of(bad_expr) == ErrorCode::ParseError);

  CHECK(code_of("name = \"x\"\n[domain\n") == ErrorCode::ParseError);

  std::string unknown = kMinimal;
  unknown += "colour = \"blue\"\n";
  CHECK(code_of(unknown, false) == ErrorCode::InvalidArgument);
  CHECK(code_of(unknown, true) == ErrorCode::ValidationError);
}

TEST_CASE("parse error carries a position") {
  try {
    parse_scenario_string("name = \"x\"\n[domain\n", "<pos>");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("<pos>:2:") != std::string::npos);
  }
}
