#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "berman/estimators.hpp"
#include "berman/experiments.hpp"

namespace berman {

// FNV-1a over the canonical config text; the digest recorded in estimates
// and manifests.
std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

// Locale-free formatting: shortest round-trip decimal for doubles.
std::string format_double(double v);

// estimates.csv schema: x,delta,estimator,value,halfWidth95,N,flaggedFraction
std::string estimates_csv(std::span<const Estimate> estimates,
                          double flaggedFraction);

// study csv: plot-ready columns plus the pass/fail bookkeeping.
std::string study_csv(const StudyReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace berman
