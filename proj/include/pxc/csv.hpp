#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pxc {

/// Incremental RFC 4180 reader: quoted fields, embedded separators/newlines,
/// doubled quotes, CRLF or LF line endings.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Empty trailing line is not a record.
    std::optional<std::vector<std::string>> next();

    /// 1-based index of the last record returned (header is record 1).
    long record_number() const { return record_; }

private:
    std::istream& in_;
    long record_ = 0;
};

std::string csv_escape(const std::string& field);
void write_csv_record(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace pxc
