#pragma once

#include <random>
#include <string>

#include "poincare/domain_spec.hpp"

namespace testing {

inline poincare::DomainSpec corpus(const std::string& name) {
  return poincare::load_domain(std::string(CORPUS_DIR) + "/" + name + ".dom");
}

inline std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(0x5eed0000ULL + seed); }

}  // namespace testing
