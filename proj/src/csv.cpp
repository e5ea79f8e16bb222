#include "tg/csv.hpp"

#include <fstream>

#include "tg/error.hpp"

namespace tg {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void emit_csv(const std::string& path, const std::string& comment,
              const CsvRow& header, const std::vector<CsvRow>& rows) {
  for (const CsvRow& row : rows) {
    if (row.size() != header.size())
      throw Error(Errc::InvalidArgument, "csv row arity does not match header");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  if (!comment.empty()) out << "# " << comment << '\n';
  auto write_row = [&out](const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(row[i]);
    }
    out << '\n';
  };
  write_row(header);
  for (const CsvRow& row : rows) write_row(row);
  if (!out) throw Error(Errc::IoError, "short write to '" + path + "'");
}

}  // namespace tg
