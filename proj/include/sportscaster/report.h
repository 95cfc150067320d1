// EvalReport output as TSV rows, JSON lines, or a plain summary block.

#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sportscaster/metrics.h"

namespace sportscaster::report {

enum class Format { kTsv, kJson };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kTsvHeader = "task\tsplit\tcount\tprecision\trecall\tf1\tbleu\tnist";

// TSV: header then one row per report, absent values as NA. JSON: one
// object per line with keys in header order, absent values null. Reals
// carry 12 significant digits.
std::string render(std::span<const metrics::EvalReport> reports, Format format);
std::string summary(std::span<const metrics::EvalReport> reports);
void write_report(std::span<const metrics::EvalReport> reports, const std::filesystem::path& path, Format format);

// Writes `contents` to `path`, replacing it; throws IoError.
void write_text(const std::filesystem::path& path, std::string_view contents);

}  // namespace sportscaster::report
