#ifndef RAMAN_CSV_HPP
#define RAMAN_CSV_HPP

#include <string>
#include <vector>

namespace raman {

// Numbers render with 9 significant digits ("%.9g"), independent of locale;
// files use '\n' line endings. Equal inputs produce byte-identical files.

std::string csv_number(double v);

// header + rows, each row joined with commas and terminated by '\n'.
std::string csv_document(const std::string& header,
                         const std::vector<std::vector<std::string>>& rows);

// Writes content to dir/name, creating dir if needed.
void write_file(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace raman

#endif  // RAMAN_CSV_HPP
