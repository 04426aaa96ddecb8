#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpllab/batch.hpp"
#include "mpllab/report.hpp"

namespace mpllab::cli {

enum class Format { Jsonl, Table };

/// "" picks a table when stdout is a terminal and nothing is redirected.
Format resolve_format(const std::string& flag, bool to_file);

/// Left-aligned text columns.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fixed(double v, int digits);
std::string sci(double v);

void print_summary_table(std::ostream& out, const std::vector<BatchSummary>& summaries);
void print_reports_table(std::ostream& out, const std::vector<VerificationReport>& reports);

}  // namespace mpllab::cli
