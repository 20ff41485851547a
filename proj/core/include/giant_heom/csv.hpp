#pragma once

// Plain CSV output: header row, comma delimiter, LF line endings and
// shortest round-trip decimal formatting of doubles.

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace giant_heom::csv {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

class Writer {
public:
    Writer(std::ostream& out, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

    std::size_t columns() const noexcept { return columns_; }

private:
    std::ostream* out_;
    std::size_t columns_;
};

// Writes `content` to `path`, creating parent directories. Throws
// std::runtime_error when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace giant_heom::csv
