#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracelab/report.hpp"

namespace tracelab::verify {

/// Desk-scale invariant suites, one per module. Each returns the reports of
/// its checks; a suite passes when every report passes.
std::vector<CheckReport> channel_suite(std::uint64_t seed);
std::vector<CheckReport> kmer_suite(std::uint64_t seed);
std::vector<CheckReport> genpoly_suite(std::uint64_t seed);
std::vector<CheckReport> hardpair_suite(std::uint64_t seed);
std::vector<CheckReport> mle_suite(std::uint64_t seed);
std::vector<CheckReport> distinguish_suite(std::uint64_t seed);

const std::vector<std::string>& suite_names();
/// `name` is one of suite_names() or "all". Throws Usage for other names.
std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed);

}  // namespace tracelab::verify
