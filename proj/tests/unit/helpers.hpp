#pragma once

#include <string>

#include "bvpair/scenario.hpp"

#ifndef BVPAIR_SCENARIO_DIR
#define BVPAIR_SCENARIO_DIR "scenarios"
#endif

namespace testing {

inline bvpair::Scenario fixture(const std::string& file) {
  bvpair::Scenario sc = bvpair::parse_scenario(std::string(BVPAIR_SCENARIO_DIR) + "/" + file);
  bvpair::build_scenario(sc);
  return sc;
}

inline bvpair::Scenario from_text(const std::string& text) {
  bvpair::Scenario sc = bvpair::parse_scenario_string(text);
  bvpair::build_scenario(sc);
  return sc;
}

inline bvpair::BVFunction bv(const std::string& toml, double lo, double hi) {
  return bvpair::BVFunction(bvpair::bv_spec_from_toml_text(toml, lo, hi));
}

}  // namespace testing
