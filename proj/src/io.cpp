#include "berman/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace berman {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string estimates_csv(std::span<const Estimate> estimates, double flaggedFraction) {
  std::string out = "x,delta,estimator,value,halfWidth95,N,flaggedFraction\n";
  for (const auto& e : estimates) {
    out += format_double(e.x);
    out += ',';
    out += format_double(e.delta);
    out += ',';
    out += e.estimator;
    out += ',';
    out += format_double(e.value);
    out += ',';
    out += format_double(e.halfWidth95);
    out += ',';
    out += std::to_string(e.sampleCount);
    out += ',';
    out += format_double(flaggedFraction);
    out += '\n';
  }
  return out;
}

std::string study_csv(const StudyReport& report) {
  std::string out =
      "study,label,param,x,delta,reference,value,lower,upper,tolerance,passed,expectFail,"
      "provenance\n";
  for (const auto& r : report.rows) {
    out += report.kind;
    out += ',';
    out += r.label;
    out += ',';
    out += format_double(r.param);
    out += ',';
    out += format_double(r.x);
    out += ',';
    out += format_double(r.delta);
    out += ',';
    out += format_double(r.reference);
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += format_double(r.lower);
    out += ',';
    out += format_double(r.upper);
    out += ',';
    out += format_double(r.tolerance);
    out += ',';
    out += (r.passed ? "1" : "0");
    out += ',';
    out += (r.expectFail ? "1" : "0");
    out += ',';
    out += r.provenance;
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace berman
