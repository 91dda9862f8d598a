#include "stabcert/csv.hpp"

#include <cstdio>

namespace stabcert {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
    out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::comment_seed(std::uint64_t seed) { comment("seed", std::to_string(seed)); }

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_double(values[i]);
    out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
}

}  // namespace stabcert
