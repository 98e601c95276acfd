#ifndef SKETCHY_VERIFY_HPP_
#define SKETCHY_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace sketchy {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  int trials = 0;     // 0 keeps each suite's default
  int instances = 0;  // 0 keeps each suite's default
};

/// Runs one of the named verification suites (lemma1, lemma3, lemma4,
/// lemma5, lemma7, thm1, thm2, all) and returns one check per assertion.
std::vector<VerifyCheck> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& options);

bool all_pass(const std::vector<VerifyCheck>& checks);

}  // namespace sketchy

#endif  // SKETCHY_VERIFY_HPP_
