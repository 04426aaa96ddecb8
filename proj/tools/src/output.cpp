#include "output.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <unistd.h>

#include "mpllab/error.hpp"

namespace mpllab::cli {

Format resolve_format(const std::string& flag, bool to_file) {
  if (flag == "jsonl") return Format::Jsonl;
  if (flag == "table") return Format::Table;
  if (!flag.empty()) throw Error(ErrorCode::InvalidArgument, "--format must be jsonl or table");
  return !to_file && ::isatty(STDOUT_FILENO) ? Format::Table : Format::Jsonl;
}

void Table::print(std::ostream& out) const {
  std::vector<std::size_t> width(header_.size());
  for (std::size_t c = 0; c < header_.size(); ++c) width[c] = header_[c].size();
  for (const auto& row : rows_)
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  };
  line(header_);
  for (const auto& row : rows_) line(row);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v == 0.0 ? 0.0 : v);
  return buf;
}

void print_summary_table(std::ostream& out, const std::vector<BatchSummary>& summaries) {
  Table t({"check", "instances", "passed", "min_margin", "near_eq"});
  for (const BatchSummary& s : summaries) {
    t.add({s.name, std::to_string(s.instances), std::to_string(s.passes), sci(s.min_margin),
           std::to_string(s.near_equalities)});
  }
  t.print(out);
}

void print_reports_table(std::ostream& out, const std::vector<VerificationReport>& reports) {
  Table t({"check", "pass", "lhs", "rhs", "margin", "tolerance"});
  for (const VerificationReport& r : reports) {
    t.add({r.name, r.pass ? "yes" : "NO", sci(r.lhs), sci(r.rhs), sci(r.margin), sci(r.tolerance)});
  }
  t.print(out);
}

}  // namespace mpllab::cli
