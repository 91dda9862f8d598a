#ifndef STABCERT_CSV_HPP
#define STABCERT_CSV_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace stabcert {

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_double(double value);

/// Writer for the project's CSV flavor: optional `# key=value` comment
/// lines, one header row, then data rows at full precision.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& key, const std::string& value);
    void comment_seed(std::uint64_t seed);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

  private:
    std::ostream& out_;
};

}  // namespace stabcert

#endif
