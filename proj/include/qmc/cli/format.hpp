#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmc::cli {

// Fixed 12-significant-digit rendering used for every CSV number.
std::string format_number(double v);

// Comma-separated rows with LF endings. Fields are written verbatim; callers
// only pass identifiers and numbers, which never need quoting.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
};

}  // namespace qmc::cli
