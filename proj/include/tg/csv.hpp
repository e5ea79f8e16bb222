#pragma once

#include <string>
#include <vector>

namespace tg {

using CsvRow = std::vector<std::string>;

/// Writes an RFC-4180-style CSV file ('\n' line endings, fields quoted only
/// when they contain commas, quotes or newlines). A nonempty comment becomes
/// a leading "# ..." line. Every row must match the header arity.
void emit_csv(const std::string& path, const std::string& comment,
              const CsvRow& header, const std::vector<CsvRow>& rows);

std::string csv_escape(const std::string& field);

}  // namespace tg
