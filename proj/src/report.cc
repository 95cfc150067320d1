#include "sportscaster/report.h"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sportscaster/text.h"

namespace sportscaster::report {

namespace {

std::string cell(const std::optional<double>& v) { return v ? text::format_real(*v) : "NA"; }

nlohmann::ordered_json number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return std::stod(text::format_real(*v));
}

}  // namespace

std::string render(std::span<const metrics::EvalReport> reports, Format format) {
  std::ostringstream out;
  if (format == Format::kTsv) {
    out << kTsvHeader << '\n';
    for (const auto& r : reports)
      out << r.task << '\t' << r.split << '\t' << r.count << '\t' << cell(r.precision) << '\t' << cell(r.recall)
          << '\t' << cell(r.f1) << '\t' << cell(r.bleu) << '\t' << cell(r.nist) << '\n';
    return out.str();
  }
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["task"] = r.task;
    j["split"] = r.split;
    j["count"] = r.count;
    j["precision"] = number(r.precision);
    j["recall"] = number(r.recall);
    j["f1"] = number(r.f1);
    j["bleu"] = number(r.bleu);
    j["nist"] = number(r.nist);
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string summary(std::span<const metrics::EvalReport> reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << r.task << " [" << r.split << ", n=" << r.count << "]";
    if (r.precision) out << "  P=" << text::format_real(*r.precision);
    if (r.recall) out << "  R=" << text::format_real(*r.recall);
    if (r.f1) out << "  F1=" << text::format_real(*r.f1);
    if (r.bleu) out << "  BLEU=" << text::format_real(*r.bleu);
    if (r.nist) out << "  NIST=" << text::format_real(*r.nist);
    out << '\n';
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void write_report(std::span<const metrics::EvalReport> reports, const std::filesystem::path& path, Format format) {
  write_text(path, render(reports, format));
}

}  // namespace sportscaster::report
