#pragma once

#include <string>

#include "gwborder/border.hpp"
#include "gwborder/family.hpp"
#include "gwborder/oracle.hpp"
#include "gwborder/sampler.hpp"

namespace gwb {

// CSV: header row, comma separated, LF endings. JSON: one object carrying
// "schema": "gw-border/1" and the command name. Floats use 15 significant
// digits; exact values are "p/q" strings.
enum class Format { csv, json };

inline constexpr const char* kSchema = "gw-border/1";

std::string format_double(double x);
// x rounded to 15 significant digits.
double round15(double x);

// Throws Errc::not_in_kstar for families without an apex.
std::string render_apex(const OffspringFamily& fam, Format format);
std::string render_table(const BorderTable& table, Format format);
std::string render_limit(const std::string& family, const LimitConstant& limit, Format format);
std::string render_estimate(const std::string& family, const EstimateReport& report, Format format);
std::string render_mean_protected(const std::string& family, const EstimateReport& report, Format format);
std::string render_oracle(const OracleReport& report, Format format);

}  // namespace gwb
